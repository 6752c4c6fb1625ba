// quantum_core.cpp

#include "qfilter/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qfilter/errors.hpp"

namespace qfilter {

namespace {

constexpr Complex kI{0.0, 1.0};

std::size_t bit_mask(int n_qubits, int qubit) {
    return std::size_t{1} << (n_qubits - 1 - qubit);
}

}  // namespace

int qubits_for_dim(std::size_t dim) {
    if (dim == 0 || (dim & (dim - 1)) != 0)
        throw DimError("dimension " + std::to_string(dim) + " is not a power of two");
    int n = 0;
    while ((std::size_t{1} << n) < dim) ++n;
    return n;
}

// ---------------------------------------------------------------------------
// StateVector / DensityMatrix
// ---------------------------------------------------------------------------

StateVector::StateVector() : amps_(CVector::Ones(1)), n_qubits_(0) {}

StateVector::StateVector(CVector amplitudes)
    : amps_(std::move(amplitudes)), n_qubits_(qubits_for_dim(static_cast<std::size_t>(amps_.size()))) {}

StateVector StateVector::basis(int n_qubits, std::size_t index) {
    if (n_qubits < 0 || n_qubits > 30) throw DimError("unsupported qubit count");
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (index >= dim) throw IndexError("basis index out of range");
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(v));
}

StateVector StateVector::normalized() const {
    const double n = norm();
    if (n == 0.0) throw ZeroVectorError("cannot normalize a zero state");
    return StateVector(amps_ / n);
}

DensityMatrix::DensityMatrix(CMatrix entries) : rho_(std::move(entries)) {
    if (rho_.rows() != rho_.cols()) throw DimError("density matrix must be square");
    n_qubits_ = qubits_for_dim(static_cast<std::size_t>(rho_.rows()));
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol::kInput)
        throw HermiticityError("density matrix is not Hermitian");
    if (std::abs(rho_.trace() - Complex(1.0)) > tol::kInput)
        throw NormError("density matrix trace differs from 1");
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
    const auto d = Eigen::Index{1} << n_qubits;
    return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d));
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

DensityMatrix::Residuals DensityMatrix::residuals() const {
    Residuals r;
    r.hermiticity = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    r.trace_error = std::abs(rho_.trace() - Complex(1.0));
    const CMatrix herm = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    return r;
}

double unitarity_residual(const CMatrix& u) {
    if (u.rows() != u.cols()) throw DimError("unitary must be square");
    return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

GateKind gate_kind_from_string(std::string_view name) {
    if (name == "Rx") return GateKind::Rx;
    if (name == "Ry") return GateKind::Ry;
    if (name == "Rz") return GateKind::Rz;
    if (name == "ZZ") return GateKind::ZZ;
    if (name == "H") return GateKind::H;
    if (name == "CRx") return GateKind::CRx;
    if (name == "CSWAP") return GateKind::CSWAP;
    if (name == "X") return GateKind::X;
    throw UnsupportedGate("unknown gate '" + std::string(name) + "'");
}

std::string_view to_string(GateKind kind) {
    switch (kind) {
        case GateKind::Rx: return "Rx";
        case GateKind::Ry: return "Ry";
        case GateKind::Rz: return "Rz";
        case GateKind::ZZ: return "ZZ";
        case GateKind::H: return "H";
        case GateKind::CRx: return "CRx";
        case GateKind::CSWAP: return "CSWAP";
        case GateKind::X: return "X";
    }
    throw UnsupportedGate("unknown gate kind");
}

int gate_arity(GateKind kind) {
    switch (kind) {
        case GateKind::Rx:
        case GateKind::Ry:
        case GateKind::Rz:
        case GateKind::H:
        case GateKind::X: return 1;
        case GateKind::ZZ:
        case GateKind::CRx: return 2;
        case GateKind::CSWAP: return 3;
    }
    throw UnsupportedGate("unknown gate kind");
}

bool is_parameterized(GateKind kind) {
    switch (kind) {
        case GateKind::Rx:
        case GateKind::Ry:
        case GateKind::Rz:
        case GateKind::ZZ:
        case GateKind::CRx: return true;
        default: return false;
    }
}

void GateSpec::validate() const {
    const int arity = gate_arity(kind);
    if (static_cast<int>(targets.size()) != arity)
        throw ShapeError(std::string(to_string(kind)) + " expects " + std::to_string(arity) +
                         " targets, got " + std::to_string(targets.size()));
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] < 0) throw IndexError("negative qubit index");
        for (std::size_t j = i + 1; j < targets.size(); ++j)
            if (targets[i] == targets[j]) throw IndexError("gate targets must be distinct");
    }
    if (param_index && *param_index < 0) throw IndexError("negative parameter index");
}

double GateSpec::resolve_angle(std::span<const double> params) const {
    if (!param_index) return angle;
    const auto idx = static_cast<std::size_t>(*param_index);
    if (idx >= params.size()) throw ParamShapeError("parameter index out of range");
    return params[idx];
}

CMatrix gate_matrix(const GateSpec& spec, double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    CMatrix m;
    switch (spec.kind) {
        case GateKind::Rx:
            m.resize(2, 2);
            m << c, -kI * s, -kI * s, c;
            return m;
        case GateKind::Ry:
            m.resize(2, 2);
            m << c, -s, s, c;
            return m;
        case GateKind::Rz:
            m = CMatrix::Zero(2, 2);
            m(0, 0) = std::exp(-kI * (theta / 2.0));
            m(1, 1) = std::exp(kI * (theta / 2.0));
            return m;
        case GateKind::H: {
            const double r = 1.0 / std::numbers::sqrt2;
            m.resize(2, 2);
            m << r, r, r, -r;
            return m;
        }
        case GateKind::X:
            m.resize(2, 2);
            m << 0, 1, 1, 0;
            return m;
        case GateKind::ZZ: {
            // diag over |00>,|01>,|10>,|11> of exp(-i t z1 z2 / 2)
            const Complex even = std::exp(-kI * (theta / 2.0));
            const Complex odd = std::exp(kI * (theta / 2.0));
            m = CMatrix::Zero(4, 4);
            m(0, 0) = even;
            m(1, 1) = odd;
            m(2, 2) = odd;
            m(3, 3) = even;
            return m;
        }
        case GateKind::CRx:
            m = CMatrix::Identity(4, 4);
            m(2, 2) = c;
            m(2, 3) = -kI * s;
            m(3, 2) = -kI * s;
            m(3, 3) = c;
            return m;
        case GateKind::CSWAP:
            m = CMatrix::Identity(8, 8);
            // control=1: swap |101> and |110>
            m(5, 5) = 0;
            m(6, 6) = 0;
            m(5, 6) = 1;
            m(6, 5) = 1;
            return m;
    }
    throw UnsupportedGate("unknown gate kind");
}

void apply_matrix_rows(Eigen::Ref<CMatrix> columns, const CMatrix& m, std::span<const int> targets) {
    const int n = qubits_for_dim(static_cast<std::size_t>(columns.rows()));
    const int k = static_cast<int>(targets.size());
    const auto local_dim = Eigen::Index{1} << k;
    if (m.rows() != local_dim || m.cols() != local_dim)
        throw DimError("matrix dimension does not match target count");
    std::size_t target_mask = 0;
    for (int q : targets) {
        if (q < 0 || q >= n)
            throw IndexError("qubit " + std::to_string(q) + " out of range for " + std::to_string(n) +
                             "-qubit state");
        const std::size_t b = bit_mask(n, q);
        if (target_mask & b) throw IndexError("targets must be distinct");
        target_mask |= b;
    }

    std::vector<Eigen::Index> offsets(static_cast<std::size_t>(local_dim), 0);
    for (Eigen::Index l = 0; l < local_dim; ++l)
        for (int j = 0; j < k; ++j)
            if ((l >> (k - 1 - j)) & 1) offsets[static_cast<std::size_t>(l)] |= static_cast<Eigen::Index>(bit_mask(n, targets[j]));

    std::vector<Complex> local(static_cast<std::size_t>(local_dim));
    for (Eigen::Index c = 0; c < columns.cols(); ++c) {
        Complex* col = columns.col(c).data();
        for (Eigen::Index base = 0; base < columns.rows(); ++base) {
            if (static_cast<std::size_t>(base) & target_mask) continue;
            for (std::size_t l = 0; l < local.size(); ++l) local[l] = col[base + offsets[l]];
            for (Eigen::Index r = 0; r < local_dim; ++r) {
                Complex acc = 0;
                for (Eigen::Index l = 0; l < local_dim; ++l) {
                    // plain product; std::complex operator* carries inf/nan recovery we never need
                    const Complex a = m(r, l), b = local[static_cast<std::size_t>(l)];
                    acc += Complex(a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real());
                }
                col[base + offsets[static_cast<std::size_t>(r)]] = acc;
            }
        }
    }
}

StateVector apply_matrix(StateVector state, const CMatrix& m, std::span<const int> targets) {
    apply_matrix_rows(state.amplitudes(), m, targets);
    return state;
}

StateVector apply_gate(StateVector state, const GateSpec& spec, double theta) {
    spec.validate();
    return apply_matrix(std::move(state), gate_matrix(spec, theta), spec.targets);
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    const CVector& x = a.amplitudes();
    const CVector& y = b.amplitudes();
    CVector out(x.size() * y.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
    return StateVector(std::move(out));
}

Projection project_qubit(const StateVector& state, int qubit, int outcome) {
    if (qubit < 0 || qubit >= state.n_qubits()) throw IndexError("qubit out of range");
    if (outcome != 0 && outcome != 1) throw DomainError("outcome must be 0 or 1");
    const std::size_t mask = bit_mask(state.n_qubits(), qubit);
    CVector branch = state.amplitudes();
    double p = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const bool set = (i & mask) != 0;
        const auto idx = static_cast<Eigen::Index>(i);
        if (set != (outcome == 1))
            branch(idx) = 0.0;
        else
            p += std::norm(branch(idx));
    }
    return {StateVector(std::move(branch)), p};
}

StateVector drop_zero_qubits(const StateVector& state, std::span<const int> qubits, double tolerance) {
    const int n = state.n_qubits();
    std::vector<int> keep;
    std::size_t drop_mask = 0;
    for (int q : qubits) {
        if (q < 0 || q >= n) throw IndexError("qubit out of range");
        drop_mask |= bit_mask(n, q);
    }
    for (int q = 0; q < n; ++q)
        if (!(drop_mask & bit_mask(n, q))) keep.push_back(q);

    const int m = static_cast<int>(keep.size());
    CVector out = CVector::Zero(Eigen::Index{1} << m);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const Complex amp = state[i];
        if (i & drop_mask) {
            if (std::abs(amp) > tolerance) throw DomainError("dropped qubit is not in |0>");
            continue;
        }
        std::size_t j = 0;
        for (int r = 0; r < m; ++r)
            if (i & bit_mask(n, keep[static_cast<std::size_t>(r)])) j |= std::size_t{1} << (m - 1 - r);
        out(static_cast<Eigen::Index>(j)) = amp;
    }
    return StateVector(std::move(out));
}

// ---------------------------------------------------------------------------
// Density-matrix algebra
// ---------------------------------------------------------------------------

DensityMatrix pure_to_density(const StateVector& psi) {
    if (std::abs(psi.norm() - 1.0) > tol::kInput) throw NormError("state is not normalized");
    const CVector& v = psi.amplitudes();
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix mixture(std::span<const DensityMatrix> states, std::span<const double> weights) {
    if (states.empty()) throw ShapeError("mixture of zero states");
    if (states.size() != weights.size()) throw ShapeError("states and weights differ in length");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw WeightError("negative mixture weight");
        total += w;
    }
    if (std::abs(total - 1.0) > tol::kInvariant) throw WeightError("mixture weights do not sum to 1");
    const std::size_t d = states.front().dim();
    CMatrix acc = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].dim() != d) throw DimError("mixture components differ in dimension");
        acc += weights[i] * states[i].matrix();
    }
    return DensityMatrix(std::move(acc));
}

double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) throw DimError("hs_distance: dimension mismatch");
    const CMatrix diff = rho.matrix() - sigma.matrix();
    // tr[D^2] = sum |D_ij|^2 for Hermitian D
    return diff.squaredNorm();
}

double overlap(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) throw DimError("overlap: dimension mismatch");
    // tr[AB] = sum_ij A_ij B_ji
    return (rho.matrix().cwiseProduct(sigma.matrix().transpose())).sum().real();
}

double trace_norm(const CMatrix& x) {
    if (x.rows() != x.cols()) throw DimError("trace_norm: matrix must be square");
    if (x.size() == 0) return 0.0;
    if ((x - x.adjoint()).cwiseAbs().maxCoeff() > tol::kInput)
        throw HermiticityError("trace_norm: matrix is not Hermitian");
    const CMatrix herm = 0.5 * (x + x.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

CMatrix apply_channel(std::span<const CMatrix> kraus, const CMatrix& x) {
    if (kraus.empty()) throw ShapeError("empty Kraus set");
    CMatrix out = CMatrix::Zero(kraus.front().rows(), kraus.front().rows());
    for (const auto& a : kraus) {
        if (a.cols() != x.rows()) throw DimError("Kraus operator does not match input dimension");
        out += a * x * a.adjoint();
    }
    return out;
}

double completeness_residual(std::span<const CMatrix> kraus) {
    if (kraus.empty()) throw ShapeError("empty Kraus set");
    const auto d = kraus.front().cols();
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto& a : kraus) sum += a.adjoint() * a;
    return (sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Random generators
// ---------------------------------------------------------------------------

CVector random_complex_gaussian(std::mt19937_64& rng, Eigen::Index size) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVector v(size);
    for (Eigen::Index i = 0; i < size; ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v(i) = Complex(re, im);
    }
    return v;
}

StateVector random_state(std::mt19937_64& rng, int n_qubits) {
    CVector v = random_complex_gaussian(rng, Eigen::Index{1} << n_qubits);
    v.normalize();
    return StateVector(std::move(v));
}

CMatrix random_density(std::mt19937_64& rng, int dim) {
    if (dim < 1) throw DimError("dimension must be positive");
    CVector flat = random_complex_gaussian(rng, Eigen::Index{dim} * dim);
    const CMatrix g = Eigen::Map<CMatrix>(flat.data(), dim, dim);
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

CMatrix random_unitary(std::mt19937_64& rng, int dim) {
    CVector flat = random_complex_gaussian(rng, Eigen::Index{dim} * dim);
    const CMatrix g = Eigen::Map<CMatrix>(flat.data(), dim, dim);
    Eigen::HouseholderQR<CMatrix> qr(g);
    return qr.householderQ() * CMatrix::Identity(dim, dim);
}

std::vector<CMatrix> random_cptp(std::uint64_t seed, int dim, int n_kraus) {
    if (dim < 2) throw DimError("random_cptp: dim must be at least 2");
    if (n_kraus < 1) throw ShapeError("random_cptp: need at least one Kraus operator");
    std::mt19937_64 rng(seed);
    const Eigen::Index rows = Eigen::Index{n_kraus} * dim;
    CVector flat = random_complex_gaussian(rng, rows * dim);
    const CMatrix g = Eigen::Map<CMatrix>(flat.data(), rows, dim);
    Eigen::HouseholderQR<CMatrix> qr(g);
    const CMatrix iso = qr.householderQ() * CMatrix::Identity(rows, dim);
    std::vector<CMatrix> kraus;
    kraus.reserve(static_cast<std::size_t>(n_kraus));
    for (int i = 0; i < n_kraus; ++i) kraus.emplace_back(iso.block(Eigen::Index{i} * dim, 0, dim, dim));
    return kraus;
}

}  // namespace qfilter

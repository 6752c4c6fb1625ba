// featuremap.cpp

#include "qfilter/featuremap.hpp"

#include <numeric>

#include "qfilter/errors.hpp"

namespace qfilter {

void FeatureMapCircuit::validate() const {
    if (n_system < 1) throw DimError("feature map needs at least one system qubit");
    for (const auto& g : gates) {
        g.validate();
        for (int q : g.targets)
            if (q >= n_qubits()) throw IndexError("feature-map gate acts outside system+ancilla");
        if (g.param_index && static_cast<std::size_t>(*g.param_index) >= n_params)
            throw ParamShapeError("gate parameter index exceeds parameter count");
    }
}

FeatureMapCircuit build_ansatz(int n_system, int layers) {
    if (n_system < 1) throw DimError("build_ansatz: n_system must be >= 1");
    if (layers < 1) throw DomainError("build_ansatz: layers must be >= 1");
    FeatureMapCircuit c;
    c.n_system = n_system;
    c.layers = layers;
    int p = 0;
    const int n = c.n_qubits();
    for (int layer = 0; layer < layers; ++layer) {
        for (int q = 0; q < n; ++q) {
            c.gates.push_back({GateKind::Rx, {q}, p++, 0.0});
            c.gates.push_back({GateKind::Rz, {q}, p++, 0.0});
        }
        for (int q = 0; q + 1 < n; ++q) c.gates.push_back({GateKind::CRx, {q, q + 1}, p++, 0.0});
    }
    c.n_params = static_cast<std::size_t>(p);
    return c;
}

StateVector run_circuit(StateVector state, const FeatureMapCircuit& circuit, std::span<const double> theta,
                        std::span<const int> register_qubits) {
    if (theta.size() != circuit.n_params)
        throw ParamShapeError("feature map expects " + std::to_string(circuit.n_params) + " parameters, got " +
                              std::to_string(theta.size()));
    if (static_cast<int>(register_qubits.size()) != circuit.n_qubits())
        throw ShapeError("register map does not cover the feature-map qubits");
    std::vector<int> mapped;
    for (const auto& g : circuit.gates) {
        mapped.clear();
        for (int q : g.targets) mapped.push_back(register_qubits[static_cast<std::size_t>(q)]);
        state = apply_matrix(std::move(state), gate_matrix(g, g.resolve_angle(theta)), mapped);
    }
    return state;
}

CMatrix circuit_unitary(const FeatureMapCircuit& circuit, std::span<const double> theta) {
    circuit.validate();
    const int n = circuit.n_qubits();
    const auto dim = Eigen::Index{1} << n;
    if (theta.size() != circuit.n_params)
        throw ParamShapeError("feature map expects " + std::to_string(circuit.n_params) + " parameters, got " +
                              std::to_string(theta.size()));
    CMatrix u = CMatrix::Identity(dim, dim);
    for (const auto& g : circuit.gates) apply_matrix_rows(u, gate_matrix(g, g.resolve_angle(theta)), g.targets);
    return u;
}

double KrausPair::completeness_residual() const {
    const CMatrix sum = K.adjoint() * K + K0.adjoint() * K0;
    return (sum - CMatrix::Identity(K.rows(), K.cols())).cwiseAbs().maxCoeff();
}

KrausPair KrausPair::identity(int n_qubits) {
    const auto d = Eigen::Index{1} << n_qubits;
    return {CMatrix::Identity(d, d), CMatrix::Zero(d, d)};
}

KrausPair kraus_from_circuit(const FeatureMapCircuit& circuit, std::span<const double> theta) {
    circuit.validate();
    if (theta.size() != circuit.n_params)
        throw ParamShapeError("feature map expects " + std::to_string(circuit.n_params) + " parameters, got " +
                              std::to_string(theta.size()));
    const auto d = Eigen::Index{1} << circuit.n_system;

    // Only columns with the ancilla in |0> are needed; the ancilla is the
    // least significant bit so system index j maps to 2j (F=0) / 2j+1 (F=1).
    CMatrix cols = CMatrix::Zero(2 * d, d);
    for (Eigen::Index j = 0; j < d; ++j) cols(2 * j, j) = 1.0;
    for (const auto& g : circuit.gates) apply_matrix_rows(cols, gate_matrix(g, g.resolve_angle(theta)), g.targets);

    KrausPair pair{CMatrix(d, d), CMatrix(d, d)};
    for (Eigen::Index i = 0; i < d; ++i) {
        pair.K.row(i) = cols.row(2 * i);
        pair.K0.row(i) = cols.row(2 * i + 1);
    }
    return pair;
}

FilteredDensity apply_filter(const KrausPair& pair, const DensityMatrix& rho, double floor) {
    if (static_cast<std::size_t>(pair.K.cols()) != rho.dim()) throw DimError("apply_filter: dimension mismatch");
    const CMatrix kr = pair.K * rho.matrix();
    const double p_s = kr.cwiseProduct(pair.K.conjugate()).sum().real();  // tr[K rho K^dagger]
    if (!(p_s > floor)) throw FilterAnnihilated("filter success probability " + std::to_string(p_s) + " below floor");
    CMatrix out = kr * pair.K.adjoint() / p_s;
    out = 0.5 * (out + out.adjoint());
    return {DensityMatrix(std::move(out)), std::min(p_s, 1.0)};
}

FilteredPure apply_filter(const KrausPair& pair, const StateVector& psi, double floor) {
    if (static_cast<std::size_t>(pair.K.cols()) != psi.dim()) throw DimError("apply_filter: dimension mismatch");
    CVector out = pair.K * psi.amplitudes();
    const double p_s = out.squaredNorm();
    if (!(p_s > floor)) throw FilterAnnihilated("filter success probability " + std::to_string(p_s) + " below floor");
    out /= std::sqrt(p_s);
    return {StateVector(std::move(out)), std::min(p_s, 1.0)};
}

TransformedEnsembles transform_ensemble(const KrausPair& pair, std::span<const EmbeddedSample> samples, double floor) {
    if (samples.empty()) throw ClassBalanceError("no samples");
    const auto d = pair.K.rows();
    CMatrix acc_pos = CMatrix::Zero(d, d);
    CMatrix acc_neg = CMatrix::Zero(d, d);
    std::vector<double> p_s(samples.size());
    std::vector<int> labels(samples.size());
    std::vector<std::optional<StateVector>> filtered(samples.size());
    double sum_pos = 0, sum_neg = 0, joint = 1.0;
    bool has_pos = false, has_neg = false;

    for (std::size_t m = 0; m < samples.size(); ++m) {
        const auto& s = samples[m];
        if (s.state.dim() != static_cast<std::size_t>(pair.K.cols())) throw DimError("transform_ensemble: sample dimension mismatch");
        const CVector kpsi = pair.K * s.state.amplitudes();
        const double p = std::min(kpsi.squaredNorm(), 1.0);
        p_s[m] = p;
        labels[m] = s.label;
        joint *= p;
        if (p > floor) filtered[m] = StateVector(kpsi / std::sqrt(p));
        if (s.label == 1) {
            has_pos = true;
            sum_pos += p;
            acc_pos += kpsi * kpsi.adjoint();
        } else if (s.label == -1) {
            has_neg = true;
            sum_neg += p;
            acc_neg += kpsi * kpsi.adjoint();
        } else {
            throw DomainError("sample label must be +1 or -1");
        }
    }
    if (!has_pos || !has_neg) throw ClassBalanceError("transform_ensemble needs both classes");
    if (!(sum_pos > floor) || !(sum_neg > floor)) throw ClassAnnihilated("a whole class was filtered out");

    acc_pos /= sum_pos;
    acc_neg /= sum_neg;
    acc_pos = 0.5 * (acc_pos + acc_pos.adjoint()).eval();
    acc_neg = 0.5 * (acc_neg + acc_neg.adjoint()).eval();

    const double mean = (sum_pos + sum_neg) / static_cast<double>(samples.size());
    return TransformedEnsembles{
        DensityMatrix(std::move(acc_pos)), DensityMatrix(std::move(acc_neg)), std::move(p_s), std::move(labels),
        std::move(filtered), sum_pos, sum_neg, mean, joint};
}

}  // namespace qfilter

// quantum_core.hpp
// Exact dense complex linear algebra for small qubit registers: states,
// density matrices, gates, projections, distances and random channels.
//
// Qubit order is big-endian throughout: qubit 0 is the most significant bit
// of a basis index, so |q0 q1 ... q(n-1)> has index sum_j q_j * 2^(n-1-j).

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qfilter {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

namespace tol {
inline constexpr double kInvariant = 1e-10;  // invariant checks
inline constexpr double kInput = 1e-8;       // validation of caller input
inline constexpr double kExact = 1e-9;       // agreement of two exact paths
}  // namespace tol

/// Number of qubits for a power-of-two dimension; throws DimError otherwise.
int qubits_for_dim(std::size_t dim);

/// Pure state over n qubits. Amplitudes need not be normalized: projected
/// branches are carried unnormalized together with their probability.
class StateVector {
public:
    StateVector();  // zero-qubit state with amplitude 1
    explicit StateVector(CVector amplitudes);

    static StateVector basis(int n_qubits, std::size_t index);
    static StateVector zeros(int n_qubits) { return basis(n_qubits, 0); }

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }

    const CVector& amplitudes() const noexcept { return amps_; }
    CVector& amplitudes() noexcept { return amps_; }
    Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

    double norm() const { return amps_.norm(); }
    StateVector normalized() const;

private:
    CVector amps_;
    int n_qubits_ = 0;
};

/// Hermitian, unit-trace, positive semidefinite operator on n qubits.
/// Construction checks hermiticity and trace at input tolerance; positivity
/// is checked on demand through residuals().
class DensityMatrix {
public:
    explicit DensityMatrix(CMatrix entries);

    static DensityMatrix maximally_mixed(int n_qubits);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(rho_.rows()); }
    const CMatrix& matrix() const noexcept { return rho_; }

    double purity() const;

    struct Residuals {
        double hermiticity = 0;     // max |rho - rho^dagger|
        double trace_error = 0;     // |tr rho - 1|
        double min_eigenvalue = 0;
    };
    Residuals residuals() const;

private:
    CMatrix rho_;
    int n_qubits_ = 0;
};

/// Max-norm of U^dagger U - I.
double unitarity_residual(const CMatrix& u);

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

enum class GateKind { Rx, Ry, Rz, ZZ, H, CRx, CSWAP, X };

GateKind gate_kind_from_string(std::string_view name);
std::string_view to_string(GateKind kind);
int gate_arity(GateKind kind);
bool is_parameterized(GateKind kind);

/// One gate in a circuit. Trainable gates carry a parameter index into the
/// circuit's parameter vector; other parameterized gates use `angle`.
/// Two-qubit controlled gates list the control first; CSWAP is
/// (control, a, b).
struct GateSpec {
    GateKind kind = GateKind::X;
    std::vector<int> targets;
    std::optional<int> param_index;
    double angle = 0.0;

    void validate() const;
    /// Angle for this gate under `params` (fixed angle when not trainable).
    double resolve_angle(std::span<const double> params) const;
};

/// Local unitary of the gate, dimension 2^arity. Conventions:
/// Ra(t) = exp(-i t sigma_a / 2), ZZ(t) = exp(-i t Z(x)Z / 2).
CMatrix gate_matrix(const GateSpec& spec, double theta = 0.0);

/// Applies a 2^k x 2^k matrix to the listed qubits (first target = most
/// significant local bit). Norm is preserved only if the matrix is unitary.
StateVector apply_matrix(StateVector state, const CMatrix& m, std::span<const int> targets);

StateVector apply_gate(StateVector state, const GateSpec& spec, double theta = 0.0);

/// Same on every column of `columns`, each column a state of the register.
void apply_matrix_rows(Eigen::Ref<CMatrix> columns, const CMatrix& m, std::span<const int> targets);

/// Kronecker product; qubits of `a` come first.
StateVector tensor(const StateVector& a, const StateVector& b);

struct Projection {
    StateVector branch;   // unnormalized
    double probability = 0;
};

/// Projects one qubit onto |outcome>; the branch keeps the full register.
Projection project_qubit(const StateVector& state, int qubit, int outcome);

/// Removes qubits that are known to be in |0>. Throws DomainError if any
/// amplitude outside that subspace exceeds `tolerance`.
StateVector drop_zero_qubits(const StateVector& state, std::span<const int> qubits,
                             double tolerance = 1e-12);

// ---------------------------------------------------------------------------
// Density-matrix algebra
// ---------------------------------------------------------------------------

DensityMatrix pure_to_density(const StateVector& psi);

DensityMatrix mixture(std::span<const DensityMatrix> states, std::span<const double> weights);

/// tr[(rho - sigma)^2].
double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Re tr[rho sigma].
double overlap(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const CMatrix& x);

/// sum_i A_i X A_i^dagger.
CMatrix apply_channel(std::span<const CMatrix> kraus, const CMatrix& x);

/// Max-norm of sum_i A_i^dagger A_i - I.
double completeness_residual(std::span<const CMatrix> kraus);

// ---------------------------------------------------------------------------
// Random generators (deterministic per seed / engine state)
// ---------------------------------------------------------------------------

/// Kraus set of a random CPTP map: the dim-column isometry from the QR
/// factorization of a (n_kraus*dim) x dim complex Gaussian block, cut into
/// n_kraus square blocks.
std::vector<CMatrix> random_cptp(std::uint64_t seed, int dim, int n_kraus);

CVector random_complex_gaussian(std::mt19937_64& rng, Eigen::Index size);
StateVector random_state(std::mt19937_64& rng, int n_qubits);
/// Ginibre-ensemble mixed state of arbitrary dimension.
CMatrix random_density(std::mt19937_64& rng, int dim);
CMatrix random_unitary(std::mt19937_64& rng, int dim);

}  // namespace qfilter

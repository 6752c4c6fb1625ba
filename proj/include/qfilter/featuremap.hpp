// featuremap.hpp
// Post-selected feature map on embedded states: the trainable system+ancilla
// circuit V(theta), its Kraus pair (K, K0) and the filtered class ensembles.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qfilter/embedding.hpp"
#include "qfilter/quantum_core.hpp"

namespace qfilter {

inline constexpr double kAnnihilationFloor = 1e-12;

/// Gate sequence on n_system + 1 local qubits. System qubits are 0..n-1 and
/// the single ancilla is qubit n (least significant).
struct FeatureMapCircuit {
    int n_system = 1;
    int layers = 0;
    std::size_t n_params = 0;
    std::vector<GateSpec> gates;

    int n_qubits() const noexcept { return n_system + 1; }
    int ancilla() const noexcept { return n_system; }
    void validate() const;
};

/// Per layer: Rx then Rz on every qubit (system and ancilla), then CRx from
/// each qubit to its successor in the chain 0 -> 1 -> ... -> ancilla. Every
/// angle is trainable; layers * (2(n+1) + n) parameters in total.
FeatureMapCircuit build_ansatz(int n_system, int layers);

/// Runs the circuit on `state`, mapping local qubit i to register qubit
/// `register_qubits[i]`.
StateVector run_circuit(StateVector state, const FeatureMapCircuit& circuit, std::span<const double> theta,
                        std::span<const int> register_qubits);

/// Full 2^(n+1) unitary of the circuit.
CMatrix circuit_unitary(const FeatureMapCircuit& circuit, std::span<const double> theta);

struct KrausPair {
    CMatrix K;   // <0|_F V |0>_F, kept branch
    CMatrix K0;  // <1|_F V |0>_F, discarded branch

    int n_qubits() const { return qubits_for_dim(static_cast<std::size_t>(K.rows())); }
    double completeness_residual() const;
    static KrausPair identity(int n_qubits);
};

KrausPair kraus_from_circuit(const FeatureMapCircuit& circuit, std::span<const double> theta);

struct FilteredDensity {
    DensityMatrix rho;
    double p_s = 0;
};

struct FilteredPure {
    StateVector psi;  // normalized
    double p_s = 0;
};

/// p_s = tr[K^dagger K rho], rho -> K rho K^dagger / p_s. Throws
/// FilterAnnihilated when p_s <= floor.
FilteredDensity apply_filter(const KrausPair& pair, const DensityMatrix& rho, double floor = kAnnihilationFloor);
FilteredPure apply_filter(const KrausPair& pair, const StateVector& psi, double floor = kAnnihilationFloor);

struct TransformedEnsembles {
    DensityMatrix rho_tilde;
    DensityMatrix sigma_tilde;
    std::vector<double> p_s_per_sample;              // source order
    std::vector<int> labels;                         // source order
    std::vector<std::optional<StateVector>> filtered;  // empty where p_s <= floor
    double p_s_class_pos = 0;  // sum of p_s over class +1
    double p_s_class_neg = 0;
    double p_succ = 0;   // mean of per-sample p_s
    double p_joint = 0;  // product of per-sample p_s

    std::size_t size() const noexcept { return labels.size(); }
};

/// Filters every sample independently and forms the class ensembles with
/// weights p_s(x_m) / p_s(class). Throws ClassBalanceError when a class is
/// missing and ClassAnnihilated when a class's total p_s is <= floor.
TransformedEnsembles transform_ensemble(const KrausPair& pair, std::span<const EmbeddedSample> samples,
                                        double floor = kAnnihilationFloor);

}  // namespace qfilter

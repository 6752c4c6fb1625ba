// circuit_protocol.hpp
// Register-level simulation of the SWAP-test classifier and risk circuits
// with post-selected feature maps. Used to cross-check the analytic
// density-matrix path; training never goes through here.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qfilter/embedding.hpp"
#include "qfilter/featuremap.hpp"

namespace qfilter {

/// Contiguous qubit range of a register.
struct QubitRange {
    int first = 0;
    int count = 0;

    std::vector<int> qubits() const;
    bool empty() const noexcept { return count == 0; }
};

/// Register layout in big-endian order:
///   classifier: L | T | t | S | C   (then F_T, F_t once the feature map runs)
///   risk:       L | T | C           (then F_T)
/// L holds ceil(log2 M) qubits; unused label branches carry zero amplitude.
struct RegisterLayout {
    QubitRange L, T, t, S, C, F_T, F_t;
    int n_data = 0;

    static RegisterLayout classifier(std::size_t n_samples, int n_data);
    static RegisterLayout risk(std::size_t n_samples, int n_data);

    /// Qubits before the feature-map ancillas.
    int base_qubits() const;
    /// Qubits including feature-map ancillas.
    int total_qubits() const;
    bool has_test() const noexcept { return !t.empty(); }
};

int label_register_width(std::size_t n_samples);

/// (1/sqrt M) sum_m |m>_L |psi_m>_T |psi_x>_t |0>_S |s_m>_C, s_m = 0 for
/// label +1 and 1 for label -1.
StateVector prepare_classifier_state(std::span<const EmbeddedSample> samples, const StateVector& test);

/// (1/sqrt M) sum_m |m>_L |psi_m>_T |s_m>_C.
StateVector prepare_risk_state(std::span<const EmbeddedSample> samples);

struct PostselectResult {
    StateVector state;  // normalized, ancillas removed
    double p_postselect = 0;
};

/// Appends the F ancillas in |0>, applies V(theta) on (T, F_T) and, when the
/// layout has a test register, on (t, F_t), then keeps the all-zero ancilla
/// outcome. Throws FilterAnnihilated when that outcome has probability
/// <= 1e-12.
PostselectResult apply_feature_maps_postselect(const StateVector& state, const RegisterLayout& layout,
                                               const FeatureMapCircuit& circuit, std::span<const double> theta);

enum class ProtocolKind { Classifier, Risk };

struct ProtocolOutcome {
    ProtocolKind kind = ProtocolKind::Classifier;
    double p_postselect = 0;        // one copy of the training register (x test filter for the classifier)
    double p_postselect_joint = 0;  // all copies together
    std::vector<double> p_C;        // classifier: c in {0,1}; risk: index 2*c1 + c2
    std::vector<std::array<double, 2>> p_S_given_C;
    double derived_value = 0;       // classifier f~ or risk D_hs estimate
    std::uint64_t shots = 0;        // 0 = exact probabilities
    std::vector<std::uint64_t> shots_per_c;
};

/// Recomputes the derived value from conditional S probabilities.
double derive_value(ProtocolKind kind, std::span<const std::array<double, 2>> p_s_given_c);

/// H(S), CSWAP(S; T_i, t_i) for every data qubit, H(S), then exact
/// conditional probabilities p(S | C). The derived value is
/// [p(0|0) - p(1|0)] - [p(0|1) - p(1|1)].
ProtocolOutcome run_classifier_protocol(std::span<const EmbeddedSample> samples, const StateVector& test,
                                        const FeatureMapCircuit& circuit, std::span<const double> theta);

/// Two post-selected copies of the risk state and a SWAP test between T1 and
/// T2. Overlaps tr[rho_a rho_b] = 2 p(S=0 | C1=a, C2=b) - 1 combine into
/// tr[rho~^2] + tr[sigma~^2] - 2 tr[rho~ sigma~].
ProtocolOutcome run_risk_protocol(std::span<const EmbeddedSample> samples, const FeatureMapCircuit& circuit,
                                  std::span<const double> theta);

/// Multinomial draw of the C outcome followed by binomial draws of S for
/// each observed C outcome. C outcomes never drawn keep conditionals {0, 0}
/// and make the derived value NaN if it depends on them.
ProtocolOutcome sample_outcomes(const ProtocolOutcome& exact, std::uint64_t shots, std::uint64_t seed);

}  // namespace qfilter

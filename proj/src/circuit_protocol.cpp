// circuit_protocol.cpp

#include "qfilter/circuit_protocol.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "qfilter/errors.hpp"

namespace qfilter {

std::vector<int> QubitRange::qubits() const {
    std::vector<int> q(static_cast<std::size_t>(count));
    std::iota(q.begin(), q.end(), first);
    return q;
}

int label_register_width(std::size_t n_samples) {
    if (n_samples < 2) throw ShapeError("label register needs at least two samples");
    int w = 0;
    while ((std::size_t{1} << w) < n_samples) ++w;
    return w;
}

RegisterLayout RegisterLayout::classifier(std::size_t n_samples, int n_data) {
    RegisterLayout r;
    r.n_data = n_data;
    const int w = label_register_width(n_samples);
    r.L = {0, w};
    r.T = {w, n_data};
    r.t = {w + n_data, n_data};
    r.S = {w + 2 * n_data, 1};
    r.C = {w + 2 * n_data + 1, 1};
    r.F_T = {r.base_qubits(), 1};
    r.F_t = {r.base_qubits() + 1, 1};
    return r;
}

RegisterLayout RegisterLayout::risk(std::size_t n_samples, int n_data) {
    RegisterLayout r;
    r.n_data = n_data;
    const int w = label_register_width(n_samples);
    r.L = {0, w};
    r.T = {w, n_data};
    r.C = {w + n_data, 1};
    r.F_T = {r.base_qubits(), 1};
    return r;
}

int RegisterLayout::base_qubits() const { return L.count + T.count + t.count + S.count + C.count; }

int RegisterLayout::total_qubits() const { return base_qubits() + F_T.count + F_t.count; }

namespace {

int common_data_qubits(std::span<const EmbeddedSample> samples) {
    if (samples.size() < 2) throw ShapeError("protocol needs at least two samples");
    const int n = samples.front().state.n_qubits();
    bool pos = false, neg = false;
    for (const auto& s : samples) {
        if (s.state.n_qubits() != n) throw DimError("samples differ in qubit count");
        if (std::abs(s.state.norm() - 1.0) > tol::kInput) throw NormError("sample state is not normalized");
        pos |= s.label == 1;
        neg |= s.label == -1;
    }
    if (!pos || !neg) throw ClassBalanceError("protocol needs both classes");
    return n;
}

StateVector label_bit(int label) { return StateVector::basis(1, label == 1 ? 0 : 1); }

/// Marginal distribution of the listed qubits; outcome index is big-endian in
/// list order.
std::vector<double> marginal(const StateVector& state, std::span<const int> qubits) {
    const int n = state.n_qubits();
    std::vector<double> p(std::size_t{1} << qubits.size(), 0.0);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        std::size_t key = 0;
        for (int q : qubits) key = (key << 1) | ((i >> (n - 1 - q)) & 1);
        p[key] += std::norm(state[i]);
    }
    return p;
}

const GateSpec kHadamard{GateKind::H, {0}, std::nullopt, 0.0};

StateVector swap_test(StateVector state, int s, std::span<const int> a, std::span<const int> b) {
    auto h = kHadamard;
    h.targets = {s};
    state = apply_gate(std::move(state), h);
    for (std::size_t i = 0; i < a.size(); ++i)
        state = apply_gate(std::move(state), GateSpec{GateKind::CSWAP, {s, a[i], b[i]}, std::nullopt, 0.0});
    return apply_gate(std::move(state), h);
}

/// Splits a joint (C..., S) distribution with S as the last bit into p(C) and
/// p(S | C).
void conditionals(const std::vector<double>& joint, ProtocolOutcome& out) {
    const std::size_t n_c = joint.size() / 2;
    out.p_C.assign(n_c, 0.0);
    out.p_S_given_C.assign(n_c, {0.0, 0.0});
    for (std::size_t c = 0; c < n_c; ++c) {
        const double pc = joint[2 * c] + joint[2 * c + 1];
        out.p_C[c] = pc;
        if (!(pc > kAnnihilationFloor)) throw ClassAnnihilated("label outcome " + std::to_string(c) + " has zero probability");
        out.p_S_given_C[c] = {joint[2 * c] / pc, joint[2 * c + 1] / pc};
    }
}

}  // namespace

StateVector prepare_classifier_state(std::span<const EmbeddedSample> samples, const StateVector& test) {
    const int n = common_data_qubits(samples);
    if (test.n_qubits() != n) throw DimError("test state differs in qubit count");
    const auto layout = RegisterLayout::classifier(samples.size(), n);
    const double amp = 1.0 / std::sqrt(static_cast<double>(samples.size()));
    const StateVector tail = tensor(test, StateVector::zeros(1));  // |psi_x>_t |0>_S
    CVector acc = CVector::Zero(Eigen::Index{1} << layout.base_qubits());
    for (std::size_t m = 0; m < samples.size(); ++m) {
        const auto branch = tensor(tensor(tensor(StateVector::basis(layout.L.count, m), samples[m].state), tail),
                                   label_bit(samples[m].label));
        acc += amp * branch.amplitudes();
    }
    return StateVector(std::move(acc));
}

StateVector prepare_risk_state(std::span<const EmbeddedSample> samples) {
    const int n = common_data_qubits(samples);
    const auto layout = RegisterLayout::risk(samples.size(), n);
    const double amp = 1.0 / std::sqrt(static_cast<double>(samples.size()));
    CVector acc = CVector::Zero(Eigen::Index{1} << layout.base_qubits());
    for (std::size_t m = 0; m < samples.size(); ++m) {
        const auto branch = tensor(tensor(StateVector::basis(layout.L.count, m), samples[m].state), label_bit(samples[m].label));
        acc += amp * branch.amplitudes();
    }
    return StateVector(std::move(acc));
}

PostselectResult apply_feature_maps_postselect(const StateVector& state, const RegisterLayout& layout,
                                               const FeatureMapCircuit& circuit, std::span<const double> theta) {
    if (state.n_qubits() != layout.base_qubits()) throw DimError("state does not match register layout");
    if (circuit.n_system != layout.n_data) throw DimError("feature map width differs from data register");
    const int n_anc = layout.F_T.count + layout.F_t.count;
    StateVector s = tensor(state, StateVector::zeros(n_anc));

    auto on_register = [&](const QubitRange& data, const QubitRange& anc) {
        auto qubits = data.qubits();
        qubits.push_back(anc.first);
        s = run_circuit(std::move(s), circuit, theta, qubits);
    };
    on_register(layout.T, layout.F_T);
    if (layout.has_test()) on_register(layout.t, layout.F_t);

    std::vector<int> ancillas{layout.F_T.first};
    if (layout.has_test()) ancillas.push_back(layout.F_t.first);
    for (int a : ancillas) s = project_qubit(s, a, 0).branch;
    const double p = s.amplitudes().squaredNorm();
    if (!(p > kAnnihilationFloor)) throw FilterAnnihilated("post-selection probability " + std::to_string(p) + " below floor");
    s = drop_zero_qubits(s, ancillas, 0.0);
    return {s.normalized(), std::min(p, 1.0)};
}

double derive_value(ProtocolKind kind, std::span<const std::array<double, 2>> p) {
    const auto bias = [&](std::size_t c) { return p[c][0] - p[c][1]; };
    if (kind == ProtocolKind::Classifier) {
        if (p.size() != 2) throw ShapeError("classifier outcome needs two label outcomes");
        return bias(0) - bias(1);
    }
    if (p.size() != 4) throw ShapeError("risk outcome needs four label outcomes");
    // bias(2a+b) = tr[rho_a rho_b]
    return bias(0) + bias(3) - bias(1) - bias(2);
}

ProtocolOutcome run_classifier_protocol(std::span<const EmbeddedSample> samples, const StateVector& test,
                                        const FeatureMapCircuit& circuit, std::span<const double> theta) {
    const auto layout = RegisterLayout::classifier(samples.size(), common_data_qubits(samples));
    auto post = apply_feature_maps_postselect(prepare_classifier_state(samples, test), layout, circuit, theta);
    const auto st = swap_test(std::move(post.state), layout.S.first, layout.T.qubits(), layout.t.qubits());

    ProtocolOutcome out;
    out.kind = ProtocolKind::Classifier;
    out.p_postselect = post.p_postselect;
    out.p_postselect_joint = post.p_postselect;
    const std::vector<int> measured{layout.C.first, layout.S.first};
    conditionals(marginal(st, measured), out);
    out.derived_value = derive_value(out.kind, out.p_S_given_C);
    return out;
}

ProtocolOutcome run_risk_protocol(std::span<const EmbeddedSample> samples, const FeatureMapCircuit& circuit,
                                  std::span<const double> theta) {
    const auto layout = RegisterLayout::risk(samples.size(), common_data_qubits(samples));
    const auto post = apply_feature_maps_postselect(prepare_risk_state(samples), layout, circuit, theta);

    // copy 1 | copy 2 | S
    const int width = layout.base_qubits();
    const StateVector both = tensor(tensor(post.state, post.state), StateVector::zeros(1));
    const int s_qubit = 2 * width;
    std::vector<int> t1 = layout.T.qubits(), t2 = layout.T.qubits();
    for (int& q : t2) q += width;
    const auto st = swap_test(both, s_qubit, t1, t2);

    ProtocolOutcome out;
    out.kind = ProtocolKind::Risk;
    out.p_postselect = post.p_postselect;
    out.p_postselect_joint = post.p_postselect * post.p_postselect;
    const std::vector<int> measured{layout.C.first, layout.C.first + width, s_qubit};
    conditionals(marginal(st, measured), out);
    out.derived_value = derive_value(out.kind, out.p_S_given_C);
    return out;
}

ProtocolOutcome sample_outcomes(const ProtocolOutcome& exact, std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) throw DomainError("sample_outcomes needs at least one shot");
    std::mt19937_64 rng(seed);
    ProtocolOutcome out = exact;
    out.shots = shots;
    const std::size_t n_c = exact.p_C.size();
    out.shots_per_c.assign(n_c, 0);

    // multinomial over C as a chain of conditional binomials
    std::uint64_t remaining = shots;
    double mass_left = 1.0;
    for (std::size_t c = 0; c < n_c; ++c) {
        std::uint64_t k = remaining;
        if (c + 1 < n_c) {
            const double p = mass_left > 0 ? std::clamp(exact.p_C[c] / mass_left, 0.0, 1.0) : 0.0;
            std::binomial_distribution<std::uint64_t> draw(remaining, p);
            k = draw(rng);
        }
        out.shots_per_c[c] = k;
        remaining -= k;
        mass_left -= exact.p_C[c];
    }

    bool complete = true;
    for (std::size_t c = 0; c < n_c; ++c) {
        const auto k = out.shots_per_c[c];
        out.p_C[c] = static_cast<double>(k) / static_cast<double>(shots);
        if (k == 0) {
            out.p_S_given_C[c] = {0.0, 0.0};
            complete = false;
            continue;
        }
        std::binomial_distribution<std::uint64_t> draw(k, std::clamp(exact.p_S_given_C[c][0], 0.0, 1.0));
        const auto zeros = draw(rng);
        const double p0 = static_cast<double>(zeros) / static_cast<double>(k);
        out.p_S_given_C[c] = {p0, 1.0 - p0};
    }
    out.derived_value = complete ? derive_value(out.kind, out.p_S_given_C) : std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace qfilter

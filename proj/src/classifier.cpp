// classifier.cpp

#include "qfilter/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "qfilter/errors.hpp"

namespace qfilter {

ClassifierOutput make_output(double value, double p_s_test) {
    ClassifierOutput out;
    out.value = value;
    out.tie_flag = std::abs(value) <= kTieTolerance;
    out.decision = (value < 0 && !out.tie_flag) ? -1 : 1;
    out.p_s_test = p_s_test;
    return out;
}

ClassEnsembles build_ensembles(std::span<const EmbeddedSample> samples) {
    std::vector<DensityMatrix> pos, neg;
    for (const auto& s : samples) {
        if (s.label == 1)
            pos.push_back(s.density());
        else if (s.label == -1)
            neg.push_back(s.density());
        else
            throw DomainError("sample label must be +1 or -1");
    }
    if (pos.empty() || neg.empty()) throw ClassBalanceError("build_ensembles needs both classes");
    const std::vector<double> wp(pos.size(), 1.0 / static_cast<double>(pos.size()));
    const std::vector<double> wn(neg.size(), 1.0 / static_cast<double>(neg.size()));
    return {mixture(pos, wp), mixture(neg, wn)};
}

ClassifierOutput fidelity_classify(const DensityMatrix& rho, const DensityMatrix& sigma, const DensityMatrix& test) {
    if (rho.dim() != sigma.dim() || rho.dim() != test.dim()) throw DimError("fidelity_classify: dimension mismatch");
    const double value = overlap(rho, test) - overlap(sigma, test);
    return make_output(std::clamp(value, -1.0, 1.0));
}

ClassifierOutput filtered_fidelity_classify(const TransformedEnsembles& ens, const KrausPair& pair,
                                            const DensityMatrix& test) {
    if (ens.rho_tilde.dim() != test.dim()) throw DimError("filtered_fidelity_classify: dimension mismatch");
    const auto filtered = apply_filter(pair, test);
    auto out = fidelity_classify(ens.rho_tilde, ens.sigma_tilde, filtered.rho);
    out.p_s_test = filtered.p_s;
    return out;
}

double weighted_empirical_risk(std::span<const double> values, std::span<const int> labels,
                               std::span<const double> weights) {
    if (values.size() != labels.size() || values.size() != weights.size())
        throw ShapeError("weighted_empirical_risk: length mismatch");
    if (values.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t m = 0; m < values.size(); ++m) acc -= weights[m] * values[m] * labels[m];
    return acc / static_cast<double>(values.size());
}

std::vector<double> baseline_weights(std::span<const int> labels) {
    const auto m = static_cast<double>(labels.size());
    const auto m_pos = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
    const auto m_neg = static_cast<double>(std::count(labels.begin(), labels.end(), -1));
    if (m_pos == 0 || m_neg == 0) throw ClassBalanceError("baseline_weights needs both classes");
    std::vector<double> w;
    w.reserve(labels.size());
    for (int y : labels) w.push_back(y == 1 ? m / m_pos : m / m_neg);
    return w;
}

std::vector<double> filtered_weights(const TransformedEnsembles& ens) {
    const auto m = static_cast<double>(ens.size());
    std::vector<double> w;
    w.reserve(ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const double cls = ens.labels[i] == 1 ? ens.p_s_class_pos : ens.p_s_class_neg;
        w.push_back(m * ens.p_s_per_sample[i] / cls);
    }
    return w;
}

std::vector<double> training_values(const ClassEnsembles& ens, std::span<const EmbeddedSample> samples) {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(fidelity_classify(ens.rho, ens.sigma, s.density()).value);
    return out;
}

std::vector<double> training_values(const TransformedEnsembles& ens) {
    std::vector<double> out;
    out.reserve(ens.size());
    for (const auto& f : ens.filtered) {
        // weight of an annihilated sample is zero, its value never contributes
        out.push_back(f ? fidelity_classify(ens.rho_tilde, ens.sigma_tilde, pure_to_density(*f)).value : 0.0);
    }
    return out;
}

namespace {

double checked_risk(double hs) {
    // tr[(rho - sigma)^2] <= 2 for unit-trace states
    if (hs > 2.0 + tol::kInvariant || hs < -tol::kInvariant)
        throw DomainError("Hilbert-Schmidt distance outside [0, 2]: " + std::to_string(hs));
    return -hs;
}

}  // namespace

double risk_from_ensembles(const TransformedEnsembles& ens) {
    return checked_risk(hs_distance(ens.rho_tilde, ens.sigma_tilde));
}

double risk_from_ensembles(const ClassEnsembles& ens) { return checked_risk(hs_distance(ens.rho, ens.sigma)); }

RiskReport constrained_risk(double risk, double p_succ, double lambda, double cutoff) {
    if (!(lambda >= 0)) throw DomainError("lambda must be non-negative");
    if (!(cutoff >= 0 && cutoff <= 1)) throw DomainError("cutoff must lie in [0, 1]");
    if (!(p_succ >= 0 && p_succ <= 1)) throw DomainError("p_succ must lie in [0, 1]");
    RiskReport r;
    r.hs_distance = -risk;
    r.p_succ = p_succ;
    r.lambda = lambda;
    r.cutoff = cutoff;
    r.penalty = lambda * std::max(0.0, cutoff - p_succ);
    r.risk = risk + r.penalty;
    return r;
}

}  // namespace qfilter

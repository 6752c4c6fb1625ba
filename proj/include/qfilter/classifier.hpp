// classifier.hpp
// Fidelity classifiers, weighted empirical risk and the Hilbert-Schmidt risk.

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "qfilter/embedding.hpp"
#include "qfilter/featuremap.hpp"

namespace qfilter {

inline constexpr double kTieTolerance = 1e-12;

struct ClassifierOutput {
    double value = 0;
    int decision = 1;       // +1 on ties, see tie_flag
    bool tie_flag = false;  // |value| <= 1e-12
    double p_s_test = 1.0;  // 1 for the unfiltered classifier
};

ClassifierOutput make_output(double value, double p_s_test = 1.0);

struct ClassEnsembles {
    DensityMatrix rho;    // class +1
    DensityMatrix sigma;  // class -1
};

/// Uniform mixtures of each class.
ClassEnsembles build_ensembles(std::span<const EmbeddedSample> samples);

/// f(x) = tr[(rho - sigma) test].
ClassifierOutput fidelity_classify(const DensityMatrix& rho, const DensityMatrix& sigma, const DensityMatrix& test);

/// Filters the test state with K, then evaluates tr[(rho~ - sigma~) test~].
/// FilterAnnihilated propagates from the test filter.
ClassifierOutput filtered_fidelity_classify(const TransformedEnsembles& ens, const KrausPair& pair,
                                            const DensityMatrix& test);

/// (1/M) sum_m -w_m f_m y_m.
double weighted_empirical_risk(std::span<const double> values, std::span<const int> labels,
                               std::span<const double> weights);

/// w_m = M / M_class.
std::vector<double> baseline_weights(std::span<const int> labels);
/// w_m = M p_s(x_m) / p_s(class of m).
std::vector<double> filtered_weights(const TransformedEnsembles& ens);

/// Classifier values of every training sample, unfiltered and filtered.
std::vector<double> training_values(const ClassEnsembles& ens, std::span<const EmbeddedSample> samples);
std::vector<double> training_values(const TransformedEnsembles& ens);

/// -hs_distance(rho~, sigma~).
double risk_from_ensembles(const TransformedEnsembles& ens);
double risk_from_ensembles(const ClassEnsembles& ens);

struct RiskReport {
    double risk = 0;
    double hs_distance = 0;
    double p_succ = 1;
    double penalty = 0;
    double lambda = 0;
    double cutoff = 0;
    /// Set by the training cost when a class was filtered out; risk then holds
    /// the sentinel value and the other fields are not meaningful.
    bool annihilated = false;
};

/// risk + lambda * max(0, c - p_succ). `risk` must be -hs_distance of the
/// ensembles, so it lies in [-2, 0].
RiskReport constrained_risk(double risk, double p_succ, double lambda, double cutoff);

}  // namespace qfilter

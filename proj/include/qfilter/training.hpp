// training.hpp
// Optimisation of feature-map (and optionally embedding) parameters against
// the post-selected Hilbert-Schmidt risk with a success-probability hinge.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qfilter/classifier.hpp"
#include "qfilter/datasets.hpp"
#include "qfilter/embedding.hpp"
#include "qfilter/featuremap.hpp"

namespace qfilter {

/// Cost returned when a whole class is filtered out; worse than any feasible
/// cost, which lies in [-2, lambda].
inline constexpr double kSentinelCost = 2.0;

enum class OptimizerKind { Sgd, Adam };

std::string to_string(OptimizerKind kind);
OptimizerKind optimizer_from_string(const std::string& name);

struct TrainConfig {
    double learning_rate = 0.05;
    int epochs = 200;
    OptimizerKind optimizer = OptimizerKind::Adam;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    double fd_step = 1e-5;  // central differences
    double lambda = 1.0;
    double cutoff = 0.0;
    double init_scale = 0.0;  // 0: start exactly at the identity filter
    /// The identity filter is a stationary point of the cost (the filter acts
    /// at second order in theta). When the starting gradient norm is below
    /// stationary_tol the first step is replaced by a seeded
    /// N(0, saddle_kick^2) displacement. 0 disables. The tolerance sits well
    /// above the rounding noise of central differences (about 1e-11 per
    /// component at the default step).
    double saddle_kick = 0.1;
    double stationary_tol = 1e-7;
    std::uint64_t seed = 0;
    bool co_train_embedding = false;
    int threads = 0;  // 0: QFILTER_THREADS or hardware concurrency

    void validate() const;
};

using Objective = std::function<RiskReport(std::span<const double>)>;

/// Constrained risk of the feature map at theta. A class annihilation yields
/// a report with risk = kSentinelCost and `annihilated` set.
RiskReport cost(std::span<const double> theta, std::span<const EmbeddedSample> samples,
                const FeatureMapCircuit& ansatz, double lambda, double cutoff);

/// Same, for an explicit Kraus pair.
RiskReport cost(const KrausPair& pair, std::span<const EmbeddedSample> samples, double lambda, double cutoff);

/// Central finite differences, one independent pair of cost calls per
/// component. Components may be spread over `threads` workers; each writes
/// only its own slot so the result does not depend on the thread count.
std::vector<double> gradient(const Objective& objective, std::span<const double> theta, double step, int threads = 1);

/// Worker count from QFILTER_THREADS (0 or unset: hardware concurrency).
int default_thread_count();

struct TrainResult {
    std::vector<double> theta_star;  // best-seen parameters
    std::vector<double> cost_trace;    // epochs + 1 entries, initial first
    std::vector<double> p_succ_trace;  // epochs + 1 entries
    RiskReport final_report;           // at theta_star
    double initial_cost = 0;
    std::size_t best_index = 0;        // position of theta_star in the trace
    std::uint64_t seed = 0;
    double wall_time = 0;              // seconds
};

/// Gradient descent (SGD or Adam) from theta0, keeping the best-seen point.
TrainResult minimize(const TrainConfig& config, const Objective& objective, std::vector<double> theta0);

/// Initial point for n parameters: zeros, or init_scale * N(0, 1) from seed.
std::vector<double> initial_parameters(const TrainConfig& config, std::size_t n);

TrainResult train(const TrainConfig& config, std::span<const EmbeddedSample> samples, const FeatureMapCircuit& ansatz);

/// Objective over a packed vector [feature-map params | embedding params],
/// where either block may be frozen. Frozen blocks are taken from the
/// values given at construction.
class JointObjective {
public:
    JointObjective(RawDataset data, EmbeddingSpec spec, FeatureMapCircuit ansatz, std::vector<double> feature_map_params,
                   bool train_feature_map, bool train_embedding, bool use_feature_map, double lambda, double cutoff);

    RiskReport operator()(std::span<const double> packed) const;

    std::vector<double> pack() const;
    void unpack(std::span<const double> packed, std::vector<double>& feature_map, std::vector<double>& embedding) const;
    std::size_t size() const;

    const FeatureMapCircuit& ansatz() const noexcept { return ansatz_; }
    const EmbeddingSpec& spec() const noexcept { return spec_; }

private:
    RawDataset data_;
    EmbeddingSpec spec_;
    FeatureMapCircuit ansatz_;
    std::vector<double> fm_params_;
    bool train_fm_;
    bool train_emb_;
    bool use_fm_;
    double lambda_;
    double cutoff_;
};

enum class ConditionMode { EmbeddingOnly, FeatureMap };

struct Condition {
    ConditionMode mode = ConditionMode::FeatureMap;
    double cutoff = 0.0;
    double lambda = 1.0;

    std::string label() const;
};

struct ConditionResult {
    Condition condition;
    double hs_distance = 0;
    double p_succ_train = 1;
    double p_test_mean = 1;   // mean filter success over test samples
    double p_succ_total = 1;  // p_succ_train * p_test_mean
    double accuracy_among_successes = 0;
    std::size_t test_successes = 0;
    std::vector<double> feature_map_params;
    std::vector<double> embedding_params;
    TrainResult train;
};

/// Seed-matched comparison of conditions on prepared (already scaled)
/// features. The embedding-only run is trained first (embedding parameters
/// only when co-training is enabled; otherwise it is just evaluated). Every
/// feature-map condition starts from its embedding and the identity filter,
/// so its Hilbert-Schmidt distance can only match or exceed it.
std::vector<ConditionResult> compare_conditions(const RawDataset& train, const RawDataset& test,
                                                const EmbeddingSpec& spec, int layers, const TrainConfig& config,
                                                std::span<const Condition> conditions);

}  // namespace qfilter

// training.cpp

#include "qfilter/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

#include "qfilter/errors.hpp"

namespace qfilter {

std::string to_string(OptimizerKind kind) { return kind == OptimizerKind::Adam ? "adam" : "sgd"; }

OptimizerKind optimizer_from_string(const std::string& name) {
    if (name == "adam") return OptimizerKind::Adam;
    if (name == "sgd") return OptimizerKind::Sgd;
    throw DomainError("unknown optimizer '" + name + "'");
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0)) throw DomainError("learning rate must be positive");
    if (epochs < 0) throw DomainError("epochs must be non-negative");
    if (!(fd_step > 0)) throw DomainError("finite-difference step must be positive");
    if (!(lambda >= 0)) throw DomainError("lambda must be non-negative");
    if (!(cutoff >= 0 && cutoff <= 1)) throw DomainError("cutoff must lie in [0, 1]");
    if (!(init_scale >= 0)) throw DomainError("init scale must be non-negative");
    if (!(saddle_kick >= 0)) throw DomainError("saddle kick must be non-negative");
    if (!(stationary_tol >= 0)) throw DomainError("stationary tolerance must be non-negative");
    if (!(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1)) throw DomainError("Adam betas must lie in [0, 1)");
    if (threads < 0) throw DomainError("thread count must be non-negative");
}

RiskReport cost(const KrausPair& pair, std::span<const EmbeddedSample> samples, double lambda, double cutoff) {
    try {
        const auto ens = transform_ensemble(pair, samples);
        return constrained_risk(risk_from_ensembles(ens), ens.p_succ, lambda, cutoff);
    } catch (const ClassAnnihilated&) {
        RiskReport r;
        r.risk = kSentinelCost;
        r.hs_distance = 0.0;
        r.p_succ = 0.0;
        r.lambda = lambda;
        r.cutoff = cutoff;
        r.annihilated = true;
        return r;
    }
}

RiskReport cost(std::span<const double> theta, std::span<const EmbeddedSample> samples,
                const FeatureMapCircuit& ansatz, double lambda, double cutoff) {
    return cost(kraus_from_circuit(ansatz, theta), samples, lambda, cutoff);
}

int default_thread_count() {
    if (const char* env = std::getenv("QFILTER_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> gradient(const Objective& objective, std::span<const double> theta, double step, int threads) {
    if (!(step > 0)) throw DomainError("finite-difference step must be positive");
    const std::size_t n = theta.size();
    std::vector<double> g(n, 0.0);
    auto component = [&](std::size_t i) {
        std::vector<double> p(theta.begin(), theta.end());
        p[i] = theta[i] + step;
        const double up = objective(p).risk;
        p[i] = theta[i] - step;
        const double down = objective(p).risk;
        g[i] = (up - down) / (2.0 * step);
    };
    const auto workers = static_cast<std::size_t>(std::clamp<int>(threads, 1, static_cast<int>(std::max<std::size_t>(n, 1))));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) component(i);
        return g;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) component(i);
        });
    pool.clear();  // joins
    return g;
}

std::vector<double> initial_parameters(const TrainConfig& config, std::size_t n) {
    std::vector<double> theta(n, 0.0);
    if (config.init_scale > 0) {
        std::mt19937_64 rng(config.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (double& t : theta) t = config.init_scale * gauss(rng);
    }
    return theta;
}

TrainResult minimize(const TrainConfig& config, const Objective& objective, std::vector<double> theta0) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const int threads = config.threads > 0 ? config.threads : default_thread_count();
    const std::size_t n = theta0.size();

    TrainResult result;
    result.seed = config.seed;
    std::vector<double> theta = std::move(theta0);
    RiskReport current = objective(theta);
    result.initial_cost = current.risk;
    result.cost_trace.push_back(current.risk);
    result.p_succ_trace.push_back(current.p_succ);
    result.theta_star = theta;
    result.final_report = current;

    std::vector<double> m(n, 0.0), v(n, 0.0);
    int adam_step = 0;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        const auto g = gradient(objective, theta, config.fd_step, threads);
        double g_norm = 0.0;
        for (double x : g) g_norm += x * x;
        if (epoch == 1 && config.saddle_kick > 0 && std::sqrt(g_norm) < config.stationary_tol) {
            // seed stream distinct from initial_parameters
            std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ull);
            std::normal_distribution<double> gauss(0.0, config.saddle_kick);
            for (double& t : theta) t += gauss(rng);
        } else if (config.optimizer == OptimizerKind::Adam) {
            ++adam_step;
            const double c1 = 1.0 - std::pow(config.beta1, adam_step);
            const double c2 = 1.0 - std::pow(config.beta2, adam_step);
            for (std::size_t i = 0; i < n; ++i) {
                m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
                v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
                theta[i] -= config.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + config.adam_epsilon);
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) theta[i] -= config.learning_rate * g[i];
        }
        current = objective(theta);
        result.cost_trace.push_back(current.risk);
        result.p_succ_trace.push_back(current.p_succ);
        if (current.risk < result.final_report.risk) {
            result.final_report = current;
            result.theta_star = theta;
            result.best_index = static_cast<std::size_t>(epoch);
        }
    }
    result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

TrainResult train(const TrainConfig& config, std::span<const EmbeddedSample> samples, const FeatureMapCircuit& ansatz) {
    const std::vector<EmbeddedSample> owned(samples.begin(), samples.end());
    const double lambda = config.lambda;
    const double cutoff = config.cutoff;
    Objective objective = [owned, ansatz, lambda, cutoff](std::span<const double> theta) {
        return cost(theta, owned, ansatz, lambda, cutoff);
    };
    return minimize(config, objective, initial_parameters(config, ansatz.n_params));
}

// ---------------------------------------------------------------------------
// Joint objective
// ---------------------------------------------------------------------------

JointObjective::JointObjective(RawDataset data, EmbeddingSpec spec, FeatureMapCircuit ansatz,
                               std::vector<double> feature_map_params, bool train_feature_map, bool train_embedding,
                               bool use_feature_map, double lambda, double cutoff)
    : data_(std::move(data)),
      spec_(std::move(spec)),
      ansatz_(std::move(ansatz)),
      fm_params_(std::move(feature_map_params)),
      train_fm_(train_feature_map && use_feature_map),
      train_emb_(train_embedding),
      use_fm_(use_feature_map),
      lambda_(lambda),
      cutoff_(cutoff) {
    data_.validate();
    spec_.validate();
    if (use_fm_ && fm_params_.size() != ansatz_.n_params) throw ParamShapeError("feature-map parameter count mismatch");
}

std::size_t JointObjective::size() const {
    return (train_fm_ ? fm_params_.size() : 0) + (train_emb_ ? spec_.params.size() : 0);
}

std::vector<double> JointObjective::pack() const {
    std::vector<double> out;
    if (train_fm_) out.insert(out.end(), fm_params_.begin(), fm_params_.end());
    if (train_emb_) out.insert(out.end(), spec_.params.begin(), spec_.params.end());
    return out;
}

void JointObjective::unpack(std::span<const double> packed, std::vector<double>& feature_map,
                            std::vector<double>& embedding) const {
    if (packed.size() != size()) throw ParamShapeError("packed parameter vector has the wrong length");
    auto it = packed.begin();
    if (train_fm_) {
        feature_map.assign(it, it + static_cast<std::ptrdiff_t>(fm_params_.size()));
        it += static_cast<std::ptrdiff_t>(fm_params_.size());
    } else {
        feature_map = fm_params_;
    }
    if (train_emb_)
        embedding.assign(it, packed.end());
    else
        embedding = spec_.params;
}

RiskReport JointObjective::operator()(std::span<const double> packed) const {
    std::vector<double> fm, emb;
    unpack(packed, fm, emb);
    EmbeddingSpec spec = spec_;
    spec.params = std::move(emb);
    const auto samples = embed_dataset(data_, spec);
    const KrausPair pair =
        use_fm_ ? kraus_from_circuit(ansatz_, fm) : KrausPair::identity(samples.front().state.n_qubits());
    return cost(pair, samples, lambda_, cutoff_);
}

// ---------------------------------------------------------------------------
// Condition comparison
// ---------------------------------------------------------------------------

std::string Condition::label() const {
    if (mode == ConditionMode::EmbeddingOnly) return "embedding-only";
    std::ostringstream ss;
    ss << "feature-map c=" << cutoff;
    return ss.str();
}

namespace {

void evaluate_test(ConditionResult& r, const RawDataset& test, const EmbeddingSpec& spec, const KrausPair& pair,
                   std::span<const EmbeddedSample> train_samples) {
    const auto test_samples = embed_points(test, spec);
    std::size_t correct = 0, successes = 0;
    double p_sum = 0.0;
    const auto ens = transform_ensemble(pair, train_samples);
    for (const auto& s : test_samples) {
        try {
            const auto out = filtered_fidelity_classify(ens, pair, s.density());
            ++successes;
            p_sum += out.p_s_test;
            if (out.decision == s.label) ++correct;
        } catch (const FilterAnnihilated&) {
        }
    }
    r.test_successes = successes;
    r.p_test_mean = test_samples.empty() ? 1.0 : p_sum / static_cast<double>(test_samples.size());
    r.p_succ_total = r.p_succ_train * r.p_test_mean;
    r.accuracy_among_successes = successes ? static_cast<double>(correct) / static_cast<double>(successes) : 0.0;
}

}  // namespace

std::vector<ConditionResult> compare_conditions(const RawDataset& train, const RawDataset& test,
                                                const EmbeddingSpec& spec, int layers, const TrainConfig& config,
                                                std::span<const Condition> conditions) {
    if (conditions.empty()) throw DomainError("compare_conditions needs at least one condition");
    config.validate();
    const auto probe = embed_dataset(train, spec);
    const int n_qubits = probe.front().state.n_qubits();
    const auto ansatz = build_ansatz(n_qubits, layers);
    const bool co_train = config.co_train_embedding && !spec.params.empty();

    // embedding-only reference: identity filter, embedding trained if enabled
    TrainConfig emb_config = config;
    if (!co_train) emb_config.epochs = 0;
    const JointObjective emb_objective(train, spec, ansatz, std::vector<double>(ansatz.n_params, 0.0), false, co_train,
                                       false, config.lambda, 0.0);
    const auto emb_train = minimize(emb_config, emb_objective, emb_objective.pack());
    ConditionResult reference;
    reference.condition = {ConditionMode::EmbeddingOnly, 0.0, config.lambda};
    emb_objective.unpack(emb_train.theta_star, reference.feature_map_params, reference.embedding_params);
    reference.hs_distance = emb_train.final_report.hs_distance;
    reference.p_succ_train = emb_train.final_report.p_succ;
    reference.train = emb_train;
    EmbeddingSpec reference_spec = spec;
    reference_spec.params = reference.embedding_params;
    evaluate_test(reference, test, reference_spec, KrausPair::identity(n_qubits), embed_dataset(train, reference_spec));

    std::vector<ConditionResult> out;
    for (const auto& cond : conditions) {
        if (cond.mode == ConditionMode::EmbeddingOnly) {
            out.push_back(reference);
            continue;
        }
        TrainConfig c_config = config;
        c_config.cutoff = cond.cutoff;
        c_config.lambda = cond.lambda;
        const JointObjective objective(train, reference_spec, ansatz,
                                       initial_parameters(c_config, ansatz.n_params), true, co_train, true,
                                       cond.lambda, cond.cutoff);
        ConditionResult r;
        r.condition = cond;
        r.train = minimize(c_config, objective, objective.pack());
        objective.unpack(r.train.theta_star, r.feature_map_params, r.embedding_params);
        r.hs_distance = r.train.final_report.hs_distance;
        r.p_succ_train = r.train.final_report.p_succ;
        EmbeddingSpec final_spec = spec;
        final_spec.params = r.embedding_params;
        evaluate_test(r, test, final_spec, kraus_from_circuit(ansatz, r.feature_map_params),
                      embed_dataset(train, final_spec));
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace qfilter

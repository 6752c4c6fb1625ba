// cli.cpp

#include "qfilter/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "qfilter/circuit_protocol.hpp"
#include "qfilter/classifier.hpp"
#include "qfilter/errors.hpp"
#include "qfilter/pipeline.hpp"
#include "qfilter/selftest.hpp"
#include "qfilter/training.hpp"

namespace qfilter::cli {
namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything a command needs to rebuild its data and model.
struct RunConfig {
    DatasetOptions dataset;
    EmbeddingOptions embedding;
    int fm_layers = 1;
    TrainConfig train;
};

struct CommonFlags {
    std::string dataset = "iris";
    std::string embedding = "auto";
    int embedding_layers = 1;
    bool ring = false;
    int layers = 1;
    double c = 0.0;
    double lambda = 1.0;
    int epochs = 200;
    double lr = 0.05;
    std::uint64_t seed = 0;
    std::string optimizer = "adam";
    double fd_step = 1e-5;
    double saddle_kick = 0.1;
    double init_scale = 0.0;
    bool co_train = false;
    int per_class = 20;
    int dims = 2;
    double separation = 3.0;
    std::string test_csv;
    std::string out;
};

void add_data_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--dataset", f.dataset, "iris | blobs | csv:<path>");
    cmd->add_option("--embedding", f.embedding, "amplitude | angle | pca:<k> | auto");
    cmd->add_option("--embedding-layers", f.embedding_layers, "trainable blocks of the pca embedding");
    cmd->add_flag("--ring", f.ring, "close the pca embedding entanglers into a ring");
    cmd->add_option("--per-class", f.per_class, "blob samples per class");
    cmd->add_option("--dims", f.dims, "blob feature dimension");
    cmd->add_option("--separation", f.separation, "distance between blob centres");
    cmd->add_option("--test-csv", f.test_csv, "held-out CSV for csv datasets");
    cmd->add_option("--seed", f.seed, "seed for data generation and training");
}

void add_train_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--layers", f.layers, "feature-map ansatz layers");
    cmd->add_option("--c", f.c, "cutoff success probability");
    cmd->add_option("--lambda", f.lambda, "penalty weight");
    cmd->add_option("--epochs", f.epochs, "optimisation steps");
    cmd->add_option("--lr", f.lr, "learning rate");
    cmd->add_option("--optimizer", f.optimizer, "adam | sgd");
    cmd->add_option("--fd-step", f.fd_step, "finite-difference step");
    cmd->add_option("--saddle-kick", f.saddle_kick, "scale of the escape step at a zero gradient (0 disables)");
    cmd->add_option("--init-scale", f.init_scale, "scale of a random initial point (0 = identity filter)");
    cmd->add_flag("--co-train-embedding", f.co_train, "also train pca embedding parameters");
}

RunConfig to_config(const CommonFlags& f) {
    RunConfig rc;
    rc.dataset.source = f.dataset;
    rc.dataset.per_class = f.per_class;
    rc.dataset.dims = f.dims;
    rc.dataset.separation = f.separation;
    rc.dataset.seed = f.seed;
    rc.dataset.test_csv = f.test_csv;
    rc.embedding.name = f.embedding;
    rc.embedding.layers = f.embedding_layers;
    rc.embedding.ring = f.ring;
    rc.fm_layers = f.layers;
    auto& t = rc.train;
    t.learning_rate = f.lr;
    t.epochs = f.epochs;
    t.lambda = f.lambda;
    t.cutoff = f.c;
    t.seed = f.seed;
    t.fd_step = f.fd_step;
    t.saddle_kick = f.saddle_kick;
    t.init_scale = f.init_scale;
    t.co_train_embedding = f.co_train;
    try {
        t.optimizer = optimizer_from_string(f.optimizer);
        t.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    if (rc.fm_layers < 1) throw UsageError("--layers must be at least 1");
    if (rc.dataset.per_class < 1 || rc.dataset.dims < 1) throw UsageError("blob sizes must be positive");
    return rc;
}

json config_json(const RunConfig& rc) {
    const auto& t = rc.train;
    return json{
        {"dataset",
         {{"source", rc.dataset.source},
          {"per_class", rc.dataset.per_class},
          {"dims", rc.dataset.dims},
          {"separation", rc.dataset.separation},
          {"seed", rc.dataset.seed},
          {"test_csv", rc.dataset.test_csv}}},
        {"embedding", {{"name", rc.embedding.name}, {"layers", rc.embedding.layers}, {"ring", rc.embedding.ring}}},
        {"feature_map", {{"layers", rc.fm_layers}}},
        {"train",
         {{"optimizer", to_string(t.optimizer)},
          {"learning_rate", t.learning_rate},
          {"epochs", t.epochs},
          {"beta1", t.beta1},
          {"beta2", t.beta2},
          {"adam_epsilon", t.adam_epsilon},
          {"fd_step", t.fd_step},
          {"lambda", t.lambda},
          {"cutoff", t.cutoff},
          {"init_scale", t.init_scale},
          {"saddle_kick", t.saddle_kick},
          {"stationary_tol", t.stationary_tol},
          {"seed", t.seed},
          {"co_train_embedding", t.co_train_embedding}}},
    };
}

RunConfig config_from_json(const json& j) {
    RunConfig rc;
    const auto& d = j.at("dataset");
    rc.dataset.source = d.at("source").get<std::string>();
    rc.dataset.per_class = d.at("per_class").get<int>();
    rc.dataset.dims = d.at("dims").get<int>();
    rc.dataset.separation = d.at("separation").get<double>();
    rc.dataset.seed = d.at("seed").get<std::uint64_t>();
    rc.dataset.test_csv = d.at("test_csv").get<std::string>();
    const auto& e = j.at("embedding");
    rc.embedding.name = e.at("name").get<std::string>();
    rc.embedding.layers = e.at("layers").get<int>();
    rc.embedding.ring = e.at("ring").get<bool>();
    rc.fm_layers = j.at("feature_map").at("layers").get<int>();
    const auto& t = j.at("train");
    auto& c = rc.train;
    c.optimizer = optimizer_from_string(t.at("optimizer").get<std::string>());
    c.learning_rate = t.at("learning_rate").get<double>();
    c.epochs = t.at("epochs").get<int>();
    c.beta1 = t.at("beta1").get<double>();
    c.beta2 = t.at("beta2").get<double>();
    c.adam_epsilon = t.at("adam_epsilon").get<double>();
    c.fd_step = t.at("fd_step").get<double>();
    c.lambda = t.at("lambda").get<double>();
    c.cutoff = t.at("cutoff").get<double>();
    c.init_scale = t.at("init_scale").get<double>();
    c.saddle_kick = t.at("saddle_kick").get<double>();
    c.stationary_tol = t.at("stationary_tol").get<double>();
    c.seed = t.at("seed").get<std::uint64_t>();
    c.co_train_embedding = t.at("co_train_embedding").get<bool>();
    return rc;
}

std::string hex(std::uint64_t v) {
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << v;
    return ss.str();
}

json manifest(const std::string& command, const RunConfig& rc, const RawDataset& train,
              const PreparedPipeline& pipeline) {
    json cfg = config_json(rc);
    cfg["embedding"]["resolved"] = pipeline.embedding_name;
    cfg["embedding"]["kind"] = to_string(pipeline.spec.kind);
    cfg["embedding"]["n_qubits"] = pipeline.spec.n_qubits;
    cfg["embedding"]["initial_params"] = pipeline.spec.params;
    return json{{"command", command},
                {"config", std::move(cfg)},
                {"dataset",
                 {{"name", train.name},
                  {"size", train.size()},
                  {"dims", train.dims()},
                  {"hash", hex(fingerprint(train))}}},
                {"seed", rc.train.seed},
                {"version", kVersion}};
}

// Loaded, preprocessed data plus the resolved embedding.
struct Prepared {
    RawDataset raw_train;
    RawDataset train;
    std::optional<RawDataset> test;
    PreparedPipeline pipeline;
};

Prepared prepare(const RunConfig& rc) {
    const auto& src = rc.dataset.source;
    if (src != "iris" && src != "blobs" && src.rfind("csv:", 0) != 0)
        throw UsageError("unknown dataset '" + src + "' (expected iris, blobs or csv:<path>)");
    LoadedData loaded = load_dataset(rc.dataset);
    Prepared p;
    p.raw_train = loaded.train;
    try {
        p.pipeline = prepare_pipeline(loaded.train, src, rc.embedding);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    p.train = p.pipeline.preprocessor.apply(loaded.train);
    if (loaded.test) p.test = p.pipeline.preprocessor.apply(*loaded.test);
    return p;
}

void write_json(const json& j, const std::string& path, std::ostream& out) {
    const std::string text = j.dump(2) + "\n";
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path + "'");
    f << text;
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json report_json(const RiskReport& r) {
    return json{{"risk", r.risk},
                {"hs_distance", r.hs_distance},
                {"p_succ", r.p_succ},
                {"penalty", r.penalty},
                {"annihilated", r.annihilated}};
}

// ---------------------------------------------------------------------------

int cmd_train(const CommonFlags& f, std::ostream& out, std::ostream& err) {
    const RunConfig rc = to_config(f);
    const Prepared p = prepare(rc);
    const auto& spec = p.pipeline.spec;
    const auto ansatz = build_ansatz(spec.n_qubits, rc.fm_layers);
    const bool co_train = rc.train.co_train_embedding && !spec.params.empty();

    const JointObjective objective(p.train, spec, ansatz, initial_parameters(rc.train, ansatz.n_params), true,
                                   co_train, true, rc.train.lambda, rc.train.cutoff);
    const TrainResult result = minimize(rc.train, objective, objective.pack());
    std::vector<double> theta, emb;
    objective.unpack(result.theta_star, theta, emb);

    EmbeddingSpec final_spec = spec;
    final_spec.params = emb;
    double p_joint = 0.0;
    try {
        p_joint = transform_ensemble(kraus_from_circuit(ansatz, theta), embed_dataset(p.train, final_spec)).p_joint;
    } catch (const ClassAnnihilated&) {
    }
    const auto& fin = result.final_report;
    if (fin.annihilated) err << "warning: best parameters filter out a whole class\n";

    json j;
    j["manifest"] = manifest("train", rc, p.raw_train, p.pipeline);
    j["initial_cost"] = result.initial_cost;
    j["final_cost"] = fin.risk;
    j["hs_distance"] = fin.hs_distance;
    j["p_succ"] = fin.p_succ;
    j["p_joint"] = p_joint;
    j["penalty"] = fin.penalty;
    j["theta_star"] = theta;
    j["embedding_params"] = emb;
    j["best_epoch"] = result.best_index;
    j["cost_trace"] = result.cost_trace;
    j["p_succ_trace"] = result.p_succ_trace;
    j["wall_time"] = result.wall_time;
    write_json(j, f.out, out);
    return kExitOk;
}

// A trained model rebuilt from its result file.
struct Model {
    RunConfig rc;
    Prepared data;
    EmbeddingSpec spec;
    FeatureMapCircuit ansatz;
    std::vector<double> theta;
    json manifest;
};

Model load_model(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open model file '" + path + "'");
    json j;
    try {
        j = json::parse(f);
        Model m;
        m.manifest = j.at("manifest");
        m.rc = config_from_json(m.manifest.at("config"));
        m.data = prepare(m.rc);
        m.spec = m.data.pipeline.spec;
        m.spec.params = j.at("embedding_params").get<std::vector<double>>();
        m.ansatz = build_ansatz(m.spec.n_qubits, m.rc.fm_layers);
        m.theta = j.at("theta_star").get<std::vector<double>>();
        m.spec.validate();
        if (m.theta.size() != m.ansatz.n_params) throw ParamShapeError("model theta has the wrong length");
        const auto hash = m.manifest.at("dataset").at("hash").get<std::string>();
        if (hash != hex(fingerprint(m.data.raw_train)))
            throw DimError("training data no longer matches the model's fingerprint");
        return m;
    } catch (const json::exception& e) {
        throw IoError("malformed model file '" + path + "': " + e.what());
    }
}

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("--x expects comma-separated numbers, got '" + text + "'");
        }
    }
    if (out.empty()) throw UsageError("--x is empty");
    return out;
}

struct ClassifyFlags {
    std::string model;
    std::string x;
    std::string test_csv;
    std::string path = "analytic";
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::string out;
};

json classify_point(const Model& m, const TransformedEnsembles& ens, const KrausPair& pair,
                    const std::vector<EmbeddedSample>& train_samples, const EmbeddedSample& s,
                    const ClassifyFlags& f, std::uint64_t shot_seed) {
    json r;
    try {
        const auto filtered = apply_filter(pair, s.state);
        double value = 0.0;
        if (f.path == "analytic") {
            value = filtered_fidelity_classify(ens, pair, s.density()).value;
        } else {
            auto outcome = run_classifier_protocol(train_samples, s.state, m.ansatz, m.theta);
            if (f.shots > 0) outcome = sample_outcomes(outcome, f.shots, shot_seed);
            value = outcome.derived_value;
        }
        if (!std::isfinite(value)) {
            r = {{"value", nullptr}, {"decision", nullptr}, {"tie_flag", false}, {"p_s_test", filtered.p_s}};
            r["note"] = "a label outcome was never sampled";
        } else {
            const auto o = make_output(value, filtered.p_s);
            r = {{"value", o.value}, {"decision", o.decision}, {"tie_flag", o.tie_flag}, {"p_s_test", o.p_s_test}};
        }
    } catch (const FilterAnnihilated&) {
        r = {{"value", nullptr}, {"decision", nullptr}, {"tie_flag", false}, {"p_s_test", 0.0}};
        r["annihilated"] = true;
    }
    if (s.label != 0) r["label"] = s.label;
    return r;
}

int cmd_classify(const ClassifyFlags& f, std::ostream& out) {
    if (f.path != "analytic" && f.path != "circuit") throw UsageError("--path must be analytic or circuit");
    if (f.shots > 0 && f.path != "circuit") throw UsageError("--shots needs --path circuit");
    const Model m = load_model(f.model);

    RawDataset points;
    if (!f.x.empty()) {
        const auto x = parse_point(f.x);
        points.features = Eigen::Map<const Eigen::RowVectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
        points.labels = {0};
        if (points.dims() != m.data.raw_train.dims())
            throw UsageError("--x has " + std::to_string(points.dims()) + " features, the model expects " +
                             std::to_string(m.data.raw_train.dims()));
        points = m.data.pipeline.preprocessor.apply(points);
    } else if (!f.test_csv.empty()) {
        points = m.data.pipeline.preprocessor.apply(load_csv(f.test_csv));
    } else if (m.data.test) {
        points = *m.data.test;
    } else {
        throw UsageError("no test input: give --x or --test-csv");
    }

    const auto train_samples = embed_dataset(m.data.train, m.spec);
    const auto pair = kraus_from_circuit(m.ansatz, m.theta);
    const auto test_samples = embed_points(points, m.spec);

    json j;
    j["manifest"] = m.manifest;
    j["manifest"]["command"] = "classify";
    j["path"] = f.path;
    j["shots"] = f.shots;
    try {
        const auto ens = transform_ensemble(pair, train_samples);
        json results = json::array();
        for (std::size_t i = 0; i < test_samples.size(); ++i)
            results.push_back(classify_point(m, ens, pair, train_samples, test_samples[i], f, f.seed + i));
        if (results.size() == 1) {
            for (auto& [k, v] : results[0].items()) j[k] = v;
        } else {
            j["results"] = std::move(results);
        }
    } catch (const ClassAnnihilated&) {
        j["value"] = nullptr;
        j["decision"] = nullptr;
        j["annihilated"] = true;
    }
    write_json(j, f.out, out);
    return kExitOk;
}

int cmd_risk(const ClassifyFlags& f, std::ostream& out) {
    if (f.path != "analytic" && f.path != "circuit") throw UsageError("--path must be analytic or circuit");
    if (f.shots > 0 && f.path != "circuit") throw UsageError("--shots needs --path circuit");
    const Model m = load_model(f.model);
    const auto samples = embed_dataset(m.data.train, m.spec);
    const auto pair = kraus_from_circuit(m.ansatz, m.theta);
    const auto report = cost(pair, samples, m.rc.train.lambda, m.rc.train.cutoff);

    json j;
    j["manifest"] = m.manifest;
    j["manifest"]["command"] = "risk";
    j["path"] = f.path;
    j["shots"] = f.shots;
    if (f.path == "analytic" || report.annihilated) {
        const json fields = report_json(report);
        for (auto& [k, v] : fields.items()) j[k] = v;
    } else {
        auto outcome = run_risk_protocol(samples, m.ansatz, m.theta);
        if (f.shots > 0) outcome = sample_outcomes(outcome, f.shots, f.seed);
        if (!std::isfinite(outcome.derived_value)) j["note"] = "a label outcome was never sampled";
        j["risk"] = nullable(-outcome.derived_value);
        j["hs_distance"] = nullable(outcome.derived_value);
        j["p_succ"] = outcome.p_postselect;
        j["p_postselect_joint"] = outcome.p_postselect_joint;
        j["penalty"] = report.penalty;
        j["annihilated"] = false;
    }
    write_json(j, f.out, out);
    return kExitOk;
}

std::vector<Condition> parse_conditions(const std::vector<std::string>& names, double lambda) {
    std::vector<Condition> out;
    for (const auto& n : names) {
        if (n == "embedding" || n == "embedding-only") {
            out.push_back({ConditionMode::EmbeddingOnly, 0.0, lambda});
        } else if (n.rfind("c=", 0) == 0) {
            double c = 0;
            try {
                c = std::stod(n.substr(2));
            } catch (const std::exception&) {
                throw UsageError("bad condition '" + n + "'");
            }
            if (!(c >= 0 && c <= 1)) throw UsageError("condition cutoff must lie in [0, 1]");
            out.push_back({ConditionMode::FeatureMap, c, lambda});
        } else {
            throw UsageError("unknown condition '" + n + "' (expected embedding or c=<value>)");
        }
    }
    if (out.size() < 2) throw UsageError("compare needs at least two conditions");
    return out;
}

std::string csv_path_for(const std::string& out) {
    if (out.empty() || out == "-") return "compare.csv";
    const auto dot = out.rfind('.');
    const auto slash = out.rfind('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return out.substr(0, dot) + ".csv";
    return out + ".csv";
}

int cmd_compare(const CommonFlags& f, const std::vector<std::string>& condition_names, std::string csv_path,
                std::ostream& out) {
    const RunConfig rc = to_config(f);
    const auto conditions = parse_conditions(condition_names, rc.train.lambda);
    const Prepared p = prepare(rc);
    const RawDataset test = p.test ? *p.test : p.train;
    const auto results =
        compare_conditions(p.train, test, p.pipeline.spec, rc.fm_layers, rc.train, conditions);
    const auto d = p.train.dims();

    json rows = json::array();
    std::ostringstream csv;
    csv << std::setprecision(17);
    csv << "condition,d,hs_distance,p_succ_train,p_succ_total,accuracy\n";
    for (const auto& r : results) {
        rows.push_back({{"condition", r.condition.label()},
                        {"d", d},
                        {"hs_distance", r.hs_distance},
                        {"p_succ_train", r.p_succ_train},
                        {"p_succ_total", r.p_succ_total},
                        {"accuracy_among_successes", r.accuracy_among_successes},
                        {"test_successes", r.test_successes},
                        {"final_cost", r.train.final_report.risk},
                        {"feature_map_params", r.feature_map_params},
                        {"embedding_params", r.embedding_params},
                        {"wall_time", r.train.wall_time}});
        csv << r.condition.label() << ',' << d << ',' << r.hs_distance << ',' << r.p_succ_train << ','
            << r.p_succ_total << ',' << r.accuracy_among_successes << '\n';
    }
    json j;
    j["manifest"] = manifest("compare", rc, p.raw_train, p.pipeline);
    j["test_size"] = test.size();
    j["rows"] = std::move(rows);
    write_json(j, f.out, out);

    if (csv_path.empty()) csv_path = csv_path_for(f.out);
    std::ofstream cf(csv_path, std::ios::binary);
    if (!cf) throw IoError("cannot write '" + csv_path + "'");
    cf << csv.str();
    return kExitOk;
}

int cmd_selftest(std::uint64_t seed, bool inject_fault, const std::string& out_path, std::ostream& out) {
    const auto reports = run_selftest({seed, inject_fault});
    bool ok = true;
    json suites = json::array();
    for (const auto& r : reports) {
        ok = ok && r.passed();
        out << (r.passed() ? "PASS " : "FAIL ") << std::left << std::setw(26) << r.name << " cases=" << r.cases
            << " failures=" << r.failures << " max_residual=" << std::scientific << std::setprecision(3)
            << r.max_residual << " tol=" << r.tolerance << std::defaultfloat << " time=" << std::fixed
            << std::setprecision(2) << r.seconds << "s" << std::defaultfloat << '\n';
        if (!r.failing_case.empty()) out << "  failing case: " << r.failing_case << '\n';
        json s{{"name", r.name},
               {"cases", r.cases},
               {"failures", r.failures},
               {"max_residual", r.max_residual},
               {"tolerance", r.tolerance},
               {"passed", r.passed()}};
        if (!r.failing_case.empty()) s["failing_case"] = json::parse(r.failing_case);
        suites.push_back(std::move(s));
    }
    if (!out_path.empty()) {
        json j{{"manifest", {{"command", "selftest"}, {"seed", seed}, {"version", kVersion}}},
               {"passed", ok},
               {"suites", std::move(suites)}};
        std::ostringstream sink;
        write_json(j, out_path, sink);
    }
    return ok ? kExitOk : kExitSelftestFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Post-selected quantum feature maps: training, classification and checks", "qfilter"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    CommonFlags train_flags;
    auto* train = app.add_subcommand("train", "train a feature map and write the model JSON");
    add_data_flags(train, train_flags);
    add_train_flags(train, train_flags);
    train->add_option("--out", train_flags.out, "result file (default: stdout)");

    ClassifyFlags classify_flags;
    auto* classify = app.add_subcommand("classify", "classify points with a trained model");
    classify->add_option("--model", classify_flags.model, "model JSON written by train")->required();
    classify->add_option("--x", classify_flags.x, "raw feature vector, comma separated");
    classify->add_option("--test-csv", classify_flags.test_csv, "CSV of points to classify");
    classify->add_option("--path", classify_flags.path, "analytic | circuit");
    classify->add_option("--shots", classify_flags.shots, "circuit shots (0 = exact)");
    classify->add_option("--seed", classify_flags.seed, "shot sampling seed");
    classify->add_option("--out", classify_flags.out, "result file (default: stdout)");

    ClassifyFlags risk_flags;
    auto* risk = app.add_subcommand("risk", "evaluate the risk of a trained model");
    risk->add_option("--model", risk_flags.model, "model JSON written by train")->required();
    risk->add_option("--path", risk_flags.path, "analytic | circuit");
    risk->add_option("--shots", risk_flags.shots, "circuit shots (0 = exact)");
    risk->add_option("--seed", risk_flags.seed, "shot sampling seed");
    risk->add_option("--out", risk_flags.out, "result file (default: stdout)");

    CommonFlags compare_flags;
    compare_flags.dataset = "blobs";
    std::vector<std::string> condition_names{"embedding", "c=0", "c=0.5"};
    std::string csv_path;
    auto* compare = app.add_subcommand("compare", "compare embedding-only and feature-map conditions");
    add_data_flags(compare, compare_flags);
    add_train_flags(compare, compare_flags);
    compare->add_option("--conditions", condition_names, "embedding and/or c=<value> entries")->delimiter(',');
    compare->add_option("--out", compare_flags.out, "result file (default: stdout)");
    compare->add_option("--csv", csv_path, "plot data (default: next to --out)");

    std::uint64_t selftest_seed = 0;
    bool inject_fault = false;
    std::string selftest_out;
    auto* selftest = app.add_subcommand("selftest", "run the invariant and differential suites");
    selftest->add_option("--seed", selftest_seed, "base seed");
    selftest->add_option("--out", selftest_out, "JSON report file");
    selftest->add_flag("--inject-fault", inject_fault)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*train) return cmd_train(train_flags, out, err);
        if (*classify) return cmd_classify(classify_flags, out);
        if (*risk) return cmd_risk(risk_flags, out);
        if (*compare) return cmd_compare(compare_flags, condition_names, csv_path, out);
        if (*selftest) return cmd_selftest(selftest_seed, inject_fault, selftest_out, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"qfilter"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace qfilter::cli

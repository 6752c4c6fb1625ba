// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Details follow each line.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfilter/classifier.hpp"
#include "qfilter/cli.hpp"
#include "qfilter/datasets.hpp"
#include "qfilter/pipeline.hpp"
#include "qfilter/selftest.hpp"
#include "qfilter/training.hpp"

using namespace qfilter;
using json = nlohmann::json;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

int failures = 0;

void report(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0) o.check(secs < limit_s, fmt("runtime %.2f s < %.0f s", secs, limit_s));
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << fmt("%.2f", secs)
              << " s)\n";
    for (const auto& n : o.notes) std::cout << "       " << n << '\n';
    std::cout.flush();
}

Outcome from_suite(const SuiteReport& r) {
    Outcome o;
    o.check(r.passed(), r.name + fmt(": %.0f cases, %.0f failures", static_cast<double>(r.cases),
                                     static_cast<double>(r.failures)) +
                            fmt(", max residual %.3g (tol %.0e)", r.max_residual, r.tolerance));
    return o;
}

double iris_test_value(const TransformedEnsembles& ens, const KrausPair& pair) {
    const auto iris = iris_builtin();
    return filtered_fidelity_classify(ens, pair, pure_to_density(angle_encode(iris.test_x[0]))).value;
}

struct BlobRun {
    int dims = 0;
    std::vector<ConditionResult> rows;  // embedding-only, c=0, c=0.5
    double seconds = 0;
};

std::vector<BlobRun> blob_runs;

const std::vector<BlobRun>& blobs() {
    if (!blob_runs.empty()) return blob_runs;
    for (int d = 2; d <= 5; ++d) {
        const auto t0 = std::chrono::steady_clock::now();
        DatasetOptions opt;
        opt.source = "blobs";
        opt.dims = d;
        opt.per_class = 20;
        opt.seed = 0;
        const auto data = load_dataset(opt);
        const auto pipe = prepare_pipeline(data.train, opt.source, EmbeddingOptions{});
        const auto train = pipe.preprocessor.apply(data.train);
        const auto test = pipe.preprocessor.apply(*data.test);
        TrainConfig cfg;
        cfg.seed = 0;
        const std::vector<Condition> conds{{ConditionMode::EmbeddingOnly, 0.0, 1.0},
                                           {ConditionMode::FeatureMap, 0.0, 1.0},
                                           {ConditionMode::FeatureMap, 0.5, 1.0}};
        BlobRun run;
        run.dims = d;
        run.rows = compare_conditions(train, test, pipe.spec, 1, cfg, conds);
        run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        blob_runs.push_back(std::move(run));
    }
    return blob_runs;
}

std::string strip_wall_time(const std::string& text) {
    auto j = json::parse(text);
    std::function<void(json&)> strip = [&](json& node) {
        if (node.is_object()) {
            node.erase("wall_time");
            for (auto& [k, v] : node.items()) strip(v);
        } else if (node.is_array()) {
            for (auto& v : node) strip(v);
        }
    };
    strip(j);
    return j.dump();
}

std::string cli_out(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (code != 0) throw std::runtime_error("cli exit " + std::to_string(code) + ": " + err.str());
    return out.str();
}

}  // namespace

int main() {
    report(1, "trace-norm contractivity of random channels", 10,
           [] { return from_suite(contractivity_suite(0, 100)); });

    report(2, "Kraus completeness over random ansatz angles", 10,
           [] { return from_suite(kraus_completeness_suite(0, 1000)); });

    report(3, "weighted empirical risk equals -D_hs (baseline and filtered)", 30,
           [] { return from_suite(risk_identity_suite(0, 100)); });

    report(4, "circuit protocol matches the analytic path", 120, [] {
        Outcome o;
        for (const auto& r : path_equivalence_suite(0, 100)) {
            const auto sub = from_suite(r);
            o.check(sub.pass, sub.notes.front().substr(5));
        }
        return o;
    });

    report(5, "Iris baseline risk and classifier value", 0, [] {
        Outcome o;
        const auto iris = iris_builtin();
        const auto samples = embed_dataset(iris.train, EmbeddingSpec::angle());
        const auto c = build_ansatz(1, 1);
        const auto r = cost(std::vector<double>(c.n_params, 0.0), samples, c, 1.0, 0.0);
        // closed forms for the angle-encoded points
        const double a1 = std::sqrt(1 - 0.796 * 0.796);
        const double t0 = -0.557, t1 = std::sqrt(1 - t0 * t0);
        const double risk_cf = -(2 - 2 * a1 * a1);
        const double f_cf = std::pow(0.796 * t0 + a1 * t1, 2) - t1 * t1;
        // -1.2672 is the closed form rounded to four places; the 1e-6 check is against the full value
        o.check(std::abs(r.risk - risk_cf) <= 1e-6, fmt("risk %.7f, closed form %.7f", r.risk, risk_cf));
        o.check(std::abs(r.risk - (-1.2672)) <= 5e-5, "risk rounds to -1.2672");
        o.check(std::abs(r.risk - (-1.307)) <= 0.06, fmt("risk within 0.06 of -1.307 (diff %.4f)", r.risk + 1.307));
        const auto ens = transform_ensemble(KrausPair::identity(1), samples);
        const double f = iris_test_value(ens, KrausPair::identity(1));
        o.check(std::abs(f - f_cf) <= 1e-6, fmt("classifier value %.7f, closed form %.7f", f, f_cf));
        o.check(std::abs(f - (-0.686)) <= 1e-3, "classifier value rounds to -0.686");
        o.check(std::abs(f - (-0.718)) <= 0.06, fmt("value within 0.06 of -0.718 (diff %.4f)", f + 0.718));
        o.check(make_output(f).decision == -1, "decision -1");
        return o;
    });

    report(6, "Iris trained with c = 0", 60, [] {
        Outcome o;
        const auto iris = iris_builtin();
        const auto samples = embed_dataset(iris.train, EmbeddingSpec::angle());
        const auto c = build_ansatz(1, 1);
        TrainConfig cfg;
        cfg.seed = 7;
        const auto res = train(cfg, samples, c);
        const auto& fin = res.final_report;
        o.check(fin.risk <= res.initial_cost - 0.1,
                fmt("risk %.6f vs baseline %.6f (improvement %.4f >= 0.1)", fin.risk, res.initial_cost,
                    res.initial_cost - fin.risk));
        const auto base_ens = transform_ensemble(KrausPair::identity(1), samples);
        const double f0 = iris_test_value(base_ens, KrausPair::identity(1));
        const auto pair = kraus_from_circuit(c, res.theta_star);
        const auto ens = transform_ensemble(pair, samples);
        const double f1 = iris_test_value(ens, pair);
        o.check(std::abs(f1) > std::abs(f0), fmt("|f| %.6f -> %.6f strictly increases", f0, f1));
        o.check(make_output(f1).decision == -1, fmt("decision stays -1 (trained value %.6f)", f1));
        o.check(fin.p_succ > 0 && fin.p_succ < 1, fmt("p_succ %.6f in (0, 1)", fin.p_succ));
        return o;
    });

    report(7, "cutoff c = 0.5 keeps p_succ > 0.5; c = 0 reaches at least its D_hs", 180, [] {
        Outcome o;
        double secs = 0;
        for (const auto& run : blobs()) {
            secs += run.seconds;
            const auto& c0 = run.rows[1];
            const auto& c5 = run.rows[2];
            o.check(c5.p_succ_train > 0.5, fmt("d=%.0f: c=0.5 p_succ %.6f > 0.5", run.dims, c5.p_succ_train));
            o.check(c0.hs_distance >= c5.hs_distance - 1e-6,
                    fmt("d=%.0f: D_hs(c=0) %.6f >= D_hs(c=0.5) %.6f - 1e-6", run.dims, c0.hs_distance,
                        c5.hs_distance));
        }
        o.notes.push_back(fmt("blob comparison time %.2f s (shared with criterion 8)", secs));
        return o;
    });

    report(8, "feature map never below embedding-only D_hs", 180, [] {
        Outcome o;
        for (const auto& run : blobs()) {
            const auto& emb = run.rows[0];
            const auto& c0 = run.rows[1];
            o.check(c0.hs_distance >= emb.hs_distance - 1e-9,
                    fmt("d=%.0f: D_hs(c=0) %.6f >= D_hs(embedding) %.6f - 1e-9", run.dims, c0.hs_distance,
                        emb.hs_distance));
            o.check(emb.p_succ_train == 1.0, fmt("d=%.0f: embedding-only p_succ %.6f == 1", run.dims, emb.p_succ_train));
        }
        return o;
    });

    report(9, "identical seeds give identical JSON", 0, [] {
        Outcome o;
        const std::string model = "acceptance_model.json";
        const std::vector<std::vector<std::string>> commands{
            {"train", "--dataset", "iris", "--epochs", "50", "--seed", "3"},
            {"train", "--dataset", "blobs", "--dims", "3", "--epochs", "20", "--seed", "5", "--saddle-kick", "0.2"},
            {"compare", "--dims", "2", "--per-class", "6", "--epochs", "15", "--seed", "9", "--csv",
             "acceptance_compare.csv"},
        };
        for (const auto& cmd : commands) {
            const auto a = strip_wall_time(cli_out(cmd));
            const auto b = strip_wall_time(cli_out(cmd));
            o.check(a == b, cmd[0] + " " + cmd[2] + ": outputs identical");
        }
        std::vector<std::string> train_cmd{"train", "--dataset", "iris", "--epochs", "40", "--seed", "1", "--out", model};
        cli_out(train_cmd);
        const auto c1 = cli_out({"classify", "--model", model});
        const auto c2 = cli_out({"classify", "--model", model});
        const auto c3 = cli_out({"classify", "--model", model, "--path", "circuit", "--shots", "1000", "--seed", "4"});
        const auto c4 = cli_out({"classify", "--model", model, "--path", "circuit", "--shots", "1000", "--seed", "4"});
        o.check(c1 == c2, "classify from a saved model: outputs identical");
        o.check(c3 == c4, "classify with shot sampling: outputs identical");
        std::remove(model.c_str());
        std::remove("acceptance_compare.csv");
        return o;
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
    return failures == 0 ? 0 : 1;
}

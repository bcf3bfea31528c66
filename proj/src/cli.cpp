#include "gal/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "json.hpp"

#include "gal/config.hpp"
#include "gal/data.hpp"
#include "gal/harness.hpp"
#include "gal/verify.hpp"

namespace gal {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void ensure_out_dir(const std::string& out_dir) {
    if (out_dir.empty()) throw ConfigError("empty output directory");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw DataError("cannot create output dir " + out_dir + ": " +
                        ec.message());
    }
}

std::string num(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

std::string join(const std::vector<int>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(xs[i]);
    }
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << content;
    if (!out) throw DataError("short write to " + path.string());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string curve_filename(Strategy s, std::uint64_t seed) {
    return "curve_" + strategy_name(s) + "_seed" + std::to_string(seed) +
           ".csv";
}

std::string curve_csv(const LearningCurve& curve) {
    std::string s = "cycle,n_labeled,mAP,batch_ids,pseudo_correct,wall_s\n";
    for (const auto& r : curve.records) {
        s += std::to_string(r.cycle) + "," + std::to_string(r.n_labeled) +
             "," + num(r.map) + "," + join(r.batch_ids) + "," +
             join(r.pseudo_correct) + "," + num(r.wall_s) + "\n";
    }
    return s;
}

std::vector<double> vec_to_std(const Vec& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

json config_json(const ExperimentConfig& c,
                 const std::vector<Strategy>& strategies) {
    json j;
    j["dataset"] = c.use_toy ? std::string("toy") : c.csv_path;
    std::vector<std::string> names;
    names.reserve(strategies.size());
    for (Strategy s : strategies) names.push_back(strategy_name(s));
    j["strategies"] = names;
    j["classifier"] = c.classifier == ClassifierKind::svm ? "svm" : "gp";
    j["selection"] =
        c.selection == SelectionMode::greedy ? "greedy" : "topb";
    json sched = json::array();
    for (const auto& st : c.schedule) {
        sched.push_back({{"cycles", st.cycles}, {"budget", st.budget}});
    }
    j["schedule"] = sched;
    j["K"] = c.K;
    j["c_reg"] = c.c_reg;
    j["include_bias"] = c.include_bias;
    j["gamma"] = c.gamma;
    j["alpha"] = c.alpha;
    j["jitter"] = c.jitter;
    j["mlp"] = {{"hidden", c.mlp.hidden},
                {"epochs", c.mlp.epochs},
                {"lr", c.mlp.lr}};
    j["nauc_lo"] = c.nauc_lo;
    j["nauc_hi"] = c.nauc_hi;
    j["seeds"] = c.seeds;
    j["n_query_pos"] = c.n_query_pos;
    j["n_seed_neg"] = c.n_seed_neg;
    j["toy"] = {{"n_pos", c.toy.n_pos},
                {"n_neg", c.toy.n_neg},
                {"std", c.toy.stddev},
                {"mean_pos", vec_to_std(c.toy.mean_pos)},
                {"mean_neg", vec_to_std(c.toy.mean_neg)},
                {"n_seed_pos", c.toy.n_seed_pos},
                {"n_seed_neg", c.toy.n_seed_neg}};
    return j;
}

LabeledSet full_truth(const Dataset& data) {
    LabeledSet all;
    for (int i = 0; i < data.n(); ++i) all.add(data.ids[i], data.truth[i]);
    return all;
}

// Refits the pre/post/all models around a run's first batch. Needs a flat
// parameter vector, so only the svm retrieval classifier qualifies.
std::optional<Diagnostics> first_batch_diagnostics(
    const ExperimentConfig& cfg, std::uint64_t seed,
    const std::vector<int>& batch) {
    if (cfg.classifier != ClassifierKind::svm || batch.empty()) {
        return std::nullopt;
    }
    RunInit init = initialize_run(cfg, seed);
    const auto pre = fit_retrieval_model(cfg, init.data, init.labeled,
                                         init.gamma);
    LabeledSet post_set = init.labeled;
    for (int id : batch) post_set.add(id, init.data.truth_of(id));
    const auto post = fit_retrieval_model(cfg, init.data, post_set,
                                          init.gamma);
    const auto all = fit_retrieval_model(cfg, init.data,
                                         full_truth(init.data), init.gamma);
    return selection_diagnostics(init.data, batch, *pre, *post, *all);
}

// Single-batch study comparing the classic toy strategies; keys not set
// here (or overridden by --config) keep the module defaults.
constexpr const char* kToyPreset = R"(strategies = random,kmeanspp,entropy,gal-svm
schedule = (1,6)
c_reg = 3
K = all
seeds = 0..9
)";

}  // namespace

int cmd_toy(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override) {
    std::string text = kToyPreset;
    if (!config_path.empty()) text += "\n" + read_file(config_path);
    RunSpec spec = parse_config_text(text);
    if (seed_override) spec.base.seeds = {*seed_override};
    ensure_out_dir(out_dir);
    const fs::path out(out_dir);

    const std::uint64_t seed0 = spec.base.seeds.front();
    ExperimentConfig cfg0 = spec.base;
    cfg0.strategy = spec.strategies.front();
    const RunInit init0 = initialize_run(cfg0, seed0);
    save_dataset(init0.data, (out / "toy.csv").string());

    std::string diag_csv = "strategy,uncertainty,diversity,theta_gap\n";
    std::vector<std::pair<std::string, std::vector<int>>> seed0_batches;
    for (Strategy s : spec.strategies) {
        ExperimentConfig cfg = spec.base;
        cfg.strategy = s;
        double u = 0.0, v = 0.0, g = 0.0;
        int n = 0;
        for (std::uint64_t seed : spec.base.seeds) {
            const LearningCurve curve = run_al_experiment(cfg, seed);
            const std::vector<int>& batch = curve.records.front().batch_ids;
            if (seed == seed0) {
                seed0_batches.emplace_back(strategy_name(s), batch);
            }
            const auto d = first_batch_diagnostics(cfg, seed, batch);
            if (!d) continue;
            u += d->uncertainty;
            v += d->diversity;
            g += d->theta_gap;
            ++n;
        }
        if (n == 0) {
            throw ConfigError("toy diagnostics need the svm classifier");
        }
        diag_csv += strategy_name(s) + "," + num(u / n) + "," + num(v / n) +
                    "," + num(g / n) + "\n";
    }
    write_file(out / "diagnostics.csv", diag_csv);

    if (init0.data.dim() == 2) {
        ExperimentConfig cfg = spec.base;
        std::vector<std::unique_ptr<ParametricModel>> models;
        std::string header = "x0,x1,initial";
        models.push_back(fit_retrieval_model(cfg, init0.data, init0.labeled,
                                             init0.gamma));
        for (const auto& [name, batch] : seed0_batches) {
            LabeledSet post_set = init0.labeled;
            for (int id : batch) post_set.add(id, init0.data.truth_of(id));
            models.push_back(fit_retrieval_model(cfg, init0.data, post_set,
                                                 init0.gamma));
            header += "," + name;
        }
        models.push_back(fit_retrieval_model(cfg, init0.data,
                                             full_truth(init0.data),
                                             init0.gamma));
        header += ",full\n";

        const Vec lo = init0.data.X.colwise().minCoeff();
        const Vec hi = init0.data.X.colwise().maxCoeff();
        const int steps = 60;
        std::string grid_csv = header;
        for (int i = 0; i <= steps; ++i) {
            for (int j = 0; j <= steps; ++j) {
                Vec x(2);
                x[0] = lo[0] - 0.5 + (hi[0] - lo[0] + 1.0) * i / steps;
                x[1] = lo[1] - 0.5 + (hi[1] - lo[1] + 1.0) * j / steps;
                std::string row = num(x[0]) + "," + num(x[1]);
                for (const auto& m : models) row += "," + num(m->score(x));
                grid_csv += row + "\n";
            }
        }
        write_file(out / "boundary.csv", grid_csv);
    }

    std::cout << "toy study written to " << out_dir << " ("
              << spec.strategies.size() << " strategies, "
              << spec.base.seeds.size() << " seeds)\n";
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override) {
    RunSpec spec = parse_config_file(config_path);
    if (seed_override) spec.base.seeds = {*seed_override};
    ensure_out_dir(out_dir);
    const fs::path out(out_dir);

    json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["config"] = config_json(spec.base, spec.strategies);
    json outputs = json::array();
    for (Strategy s : spec.strategies) {
        for (std::uint64_t seed : spec.base.seeds) {
            outputs.push_back(curve_filename(s, seed));
        }
    }
    outputs.push_back("summary.json");
    manifest["outputs"] = outputs;
    write_file(out / "manifest.json", manifest.dump(2) + "\n");

    json runs = json::array();
    bool any_failed = false;
    for (Strategy s : spec.strategies) {
        for (std::uint64_t seed : spec.base.seeds) {
            ExperimentConfig cfg = spec.base;
            cfg.strategy = s;
            cfg.seeds = {seed};
            json entry;
            entry["strategy"] = strategy_name(s);
            entry["seed"] = seed;
            try {
                const LearningCurve curve = run_al_experiment(cfg, seed);
                const std::string fname = curve_filename(s, seed);
                write_file(out / fname, curve_csv(curve));
                entry["ok"] = true;
                entry["curve_file"] = fname;
                entry["normalized_auc"] = curve.normalized_auc;
                entry["initial_map"] = curve.records.front().map;
                entry["final_map"] = curve.records.back().map;
                entry["n_labeled_final"] = curve.records.back().n_labeled;
                if (const auto acc = pseudo_label_accuracy(curve)) {
                    entry["pseudo_label_accuracy"] = *acc;
                }
                if (const auto d = first_batch_diagnostics(
                        cfg, seed, curve.records.front().batch_ids)) {
                    entry["first_batch"] = {{"uncertainty", d->uncertainty},
                                            {"diversity", d->diversity},
                                            {"theta_gap", d->theta_gap}};
                }
                std::cout << "run " << strategy_name(s) << " seed " << seed
                          << ": nauc " << curve.normalized_auc << "\n";
            } catch (const std::exception& e) {
                any_failed = true;
                entry["ok"] = false;
                entry["error"] = e.what();
                std::cout << "run " << strategy_name(s) << " seed " << seed
                          << " FAILED: " << e.what() << "\n";
            }
            runs.push_back(entry);
        }
    }

    json summary;
    summary["tool_version"] = kToolVersion;
    summary["runs"] = runs;
    write_file(out / "summary.json", summary.dump(2) + "\n");
    return any_failed ? 1 : 0;
}

int cmd_verify(const std::string& scope) {
    const std::vector<CheckResult> checks = run_verify_scope(scope);
    int n_pass = 0;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
        if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
        std::cout << "\n";
        if (c.pass) ++n_pass;
    }
    std::cout << n_pass << "/" << checks.size() << " checks passed\n";
    return n_pass == static_cast<int>(checks.size()) ? 0 : 1;
}

int cmd_report(const std::string& out_dir) {
    const fs::path path = fs::path(out_dir) / "summary.json";
    std::ifstream in(path);
    if (!in) throw DataError("no summary.json under " + out_dir);
    json summary;
    try {
        summary = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }

    std::vector<std::string> order;
    std::map<std::string, std::vector<double>> nauc;
    std::map<std::string, std::vector<double>> final_map;
    for (const auto& run : summary.at("runs")) {
        if (!run.value("ok", false)) continue;
        const std::string s = run.at("strategy").get<std::string>();
        if (nauc.find(s) == nauc.end()) order.push_back(s);
        nauc[s].push_back(run.at("normalized_auc").get<double>());
        final_map[s].push_back(run.at("final_map").get<double>());
    }
    if (order.empty()) {
        throw DataError("no successful runs in " + path.string());
    }

    const auto mean_std = [](const std::vector<double>& xs) {
        const double n = static_cast<double>(xs.size());
        double m = 0.0;
        for (double x : xs) m += x;
        m /= n;
        double var = 0.0;
        if (xs.size() > 1) {
            for (double x : xs) var += (x - m) * (x - m);
            var /= n - 1.0;
        }
        return std::pair<double, double>(m, std::sqrt(var));
    };

    std::size_t width = 8;
    for (const auto& s : order) width = std::max(width, s.size());

    std::ostringstream table;
    table << std::left;
    table.setf(std::ios::fixed);
    table.precision(4);
    table.width(width);
    table << "strategy";
    table << "  runs  nauc mean    std     final mAP   std\n";
    std::string csv =
        "strategy,n_runs,nauc_mean,nauc_std,final_map_mean,final_map_std\n";
    for (const auto& s : order) {
        const auto [nm, ns] = mean_std(nauc[s]);
        const auto [fm, fstd] = mean_std(final_map[s]);
        table.width(width);
        table << s;
        table << "  " << std::setw(4) << nauc[s].size() << "  "
              << std::setw(9) << nm << "  " << std::setw(6) << ns << "  "
              << std::setw(9) << fm << "  " << std::setw(6) << fstd << "\n";
        csv += s + "," + std::to_string(nauc[s].size()) + "," + num(nm) +
               "," + num(ns) + "," + num(fm) + "," + num(fstd) + "\n";
    }
    std::cout << table.str();
    write_file(fs::path(out_dir) / "report.csv", csv);
    return 0;
}

}  // namespace gal

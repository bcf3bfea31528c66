// Acceptance gate: one check per release criterion, runnable singly
// ("acceptance 4") or as the full battery (no arguments). Prints one
// PASS/FAIL line per criterion; a blocking failure sets the exit code.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gal/cli.hpp"
#include "gal/config.hpp"
#include "gal/data.hpp"
#include "gal/gp.hpp"
#include "gal/harness.hpp"
#include "gal/selection.hpp"
#include "gal/verify.hpp"

using namespace gal;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    bool blocking = true;
    std::string detail;
};

std::string fmt(double v, int prec = 6) {
    std::ostringstream ss;
    ss.precision(prec);
    ss << v;
    return ss.str();
}

// --- 1: greedy value within (1 - 1/e) of the brute-force optimum ----------

Outcome criterion1() {
    Rng rng(1);
    const int n_inst = 100;
    int ok = 0;
    double worst = 1e9;
    for (int it = 0; it < n_inst; ++it) {
        const GpInstance inst = random_gp_instance(rng);
        const int B = 1 + static_cast<int>(rng.uniform_int(3));
        const double f_empty = instance_objective(inst, {});
        const double f_greedy =
            instance_objective(inst, instance_greedy(inst, B));
        std::vector<int> all(inst.X_cand.rows());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
        const OptimalBatch opt = brute_force_optimal_batch(
            all, B,
            [&](const std::vector<int>& s) { return instance_objective(inst, s); });
        const double lhs = f_greedy - f_empty;
        const double rhs = (1.0 - std::exp(-1.0)) * (opt.value - f_empty);
        worst = std::min(worst, lhs - rhs);
        if (lhs >= rhs - 1e-8) ++ok;
    }
    Outcome o;
    o.pass = ok == n_inst;
    o.detail = std::to_string(ok) + "/" + std::to_string(n_inst) +
               " instances satisfy the shifted bound, worst margin " +
               fmt(worst);
    return o;
}

// --- 2: diminishing returns + monotonicity of the set objective -----------

Outcome criterion2() {
    Rng rng(2);
    const int n_triples = 200;
    int dim_violations = 0;
    std::string first;
    double worst_dim = 1e9;
    for (int it = 0; it < n_triples; ++it) {
        const GpInstance inst = random_gp_instance(rng);
        const int n = static_cast<int>(inst.X_cand.rows());
        std::vector<int> ids(n);
        for (int i = 0; i < n; ++i) ids[i] = i;
        rng.shuffle(ids);
        const int n_t = 1 + static_cast<int>(rng.uniform_int(n - 1));
        const int n_s = static_cast<int>(rng.uniform_int(n_t));
        const std::vector<int> S(ids.begin(), ids.begin() + n_s);
        const std::vector<int> T(ids.begin(), ids.begin() + n_t);
        const int x = ids[n - 1];
        const auto gain = [&](const std::vector<int>& base) {
            std::vector<int> with = base;
            with.push_back(x);
            return instance_objective(inst, with) -
                   instance_objective(inst, base);
        };
        const double margin = gain(S) - gain(T);
        worst_dim = std::min(worst_dim, margin);
        if (margin < -1e-8) {
            ++dim_violations;
            if (first.empty()) {
                first = "|S|=" + std::to_string(n_s) + " |T|=" +
                        std::to_string(n_t) + " x=" + std::to_string(x) +
                        " gamma=" + fmt(inst.gamma) + " margin=" + fmt(margin) +
                        " iter=" + std::to_string(it);
            }
        }
    }

    int mono_violations = 0;
    double worst_mono = 1e9;
    for (int it = 0; it < n_triples; ++it) {
        const GpInstance inst = random_gp_instance(rng);
        const int n = static_cast<int>(inst.X_cand.rows());
        std::vector<int> ids(n);
        for (int i = 0; i < n; ++i) ids[i] = i;
        rng.shuffle(ids);
        const std::vector<int> s(ids.begin(),
                                 ids.begin() + rng.uniform_int(n / 2) + 1);
        std::vector<int> sx = s;
        sx.push_back(ids[n - 1]);
        const double gain =
            instance_objective(inst, sx) - instance_objective(inst, s);
        worst_mono = std::min(worst_mono, gain);
        if (gain < -1e-8) ++mono_violations;
    }

    Outcome o;
    o.pass = dim_violations == 0 && mono_violations == 0;
    o.detail = "diminishing returns " +
               std::to_string(n_triples - dim_violations) + "/" +
               std::to_string(n_triples) + " (worst " + fmt(worst_dim) +
               "), monotone " + std::to_string(n_triples - mono_violations) +
               "/" + std::to_string(n_triples) + " (worst " + fmt(worst_mono) +
               ")";
    if (!first.empty()) o.detail += "; first counterexample: " + first;
    return o;
}

// --- 3: posterior equals the naive conditional Gaussian --------------------

Outcome criterion3() {
    Outcome o;
    o.pass = true;
    for (const auto& c : verify_gp()) {
        if (c.name != "gp.posterior_matches_naive_oracle" &&
            c.name != "gp.train_point_variance_le_2jitter") {
            continue;
        }
        if (!c.pass) o.pass = false;
        if (!o.detail.empty()) o.detail += "; ";
        o.detail += c.name + " " + (c.pass ? "ok" : "FAILED") + " (" +
                    c.detail + ")";
    }
    return o;
}

// --- 4: toy diagnostics table orderings ------------------------------------

Outcome criterion4() {
    const fs::path dir =
        fs::temp_directory_path() / "gal_acceptance_toy";
    fs::remove_all(dir);
    const int rc = cmd_toy("", dir.string(), std::nullopt);
    Outcome o;
    if (rc != 0) {
        o.detail = "cmd_toy exited " + std::to_string(rc);
        return o;
    }
    std::ifstream in(dir / "diagnostics.csv");
    std::string line;
    std::getline(in, line);  // header
    struct Row {
        double u, v, g;
    };
    std::map<std::string, Row> rows;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string name, u, v, g;
        std::getline(ss, name, ',');
        std::getline(ss, u, ',');
        std::getline(ss, v, ',');
        std::getline(ss, g, ',');
        rows[name] = {std::stod(u), std::stod(v), std::stod(g)};
    }
    fs::remove_all(dir);
    if (rows.size() != 4) {
        o.detail = "expected 4 diagnostics rows, got " +
                   std::to_string(rows.size());
        return o;
    }
    const auto max_by = [&](double Row::*field) {
        std::string best;
        for (const auto& [name, r] : rows) {
            if (best.empty() || r.*field > rows[best].*field) best = name;
        }
        return best;
    };
    const auto min_by = [&](double Row::*field) {
        std::string best;
        for (const auto& [name, r] : rows) {
            if (best.empty() || r.*field < rows[best].*field) best = name;
        }
        return best;
    };
    const std::string top_u = max_by(&Row::u);
    const std::string top_v = max_by(&Row::v);
    const std::string low_g = min_by(&Row::g);
    o.pass = top_u == "entropy" && top_v == "kmeanspp" && low_g == "gal-svm";
    o.detail = "max uncertainty " + top_u + " (" + fmt(rows[top_u].u) +
               ", reference 0.99), max diversity " + top_v + " (" +
               fmt(rows[top_v].v) + ", reference 0.78), min theta gap " +
               low_g + " (" + fmt(rows[low_g].g) + ", reference 0.29)";
    return o;
}

// --- 5: pseudo-labels beat chance on most seeds -----------------------------

Outcome criterion5() {
    ExperimentConfig cfg;
    cfg.strategy = Strategy::gal_svm;
    cfg.c_reg = 3.0;
    cfg.schedule = {{10, 3}};
    int above = 0;
    std::string accs;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const LearningCurve curve = run_al_experiment(cfg, seed);
        const auto acc = pseudo_label_accuracy(curve);
        if (!acc) {
            Outcome o;
            o.detail = "no pseudo-label flags recorded";
            return o;
        }
        if (*acc > 0.5) ++above;
        if (!accs.empty()) accs += " ";
        accs += fmt(*acc, 3);
    }
    Outcome o;
    o.pass = above >= 8;
    o.detail = std::to_string(above) +
               "/10 seeds with cumulative accuracy > 0.5 (need >= 8); " +
               "per-seed: " + accs;
    return o;
}

// --- 6: learning-curve dominance from a cold start --------------------------

Outcome criterion6() {
    ExperimentConfig cfg;
    cfg.toy.stddev = 1.5;
    cfg.toy.n_seed_pos = 2;
    cfg.toy.n_seed_neg = 5;
    cfg.K = 30;
    cfg.schedule = {{15, 2}};
    const auto mean_nauc = [&](Strategy s) {
        ExperimentConfig c = cfg;
        c.strategy = s;
        double sum = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            sum += run_al_experiment(c, seed).normalized_auc;
        }
        return sum / 10.0;
    };
    const double gal = mean_nauc(Strategy::gal_svm);
    const double rnd = mean_nauc(Strategy::random);
    const double margin = gal - rnd;
    Outcome o;
    o.pass = margin >= 0.0;
    o.detail = "mean nAUC gal-svm " + fmt(gal) + " vs random " + fmt(rnd) +
               ", margin " + fmt(margin) + " (required >= 0, expected >= 0.02" +
               std::string(margin >= 0.02 ? ", met" : ", not met") + ")";
    return o;
}

// --- 7: expected pseudo-label probability closed form ------------------------

Outcome criterion7() {
    const double a = normalized_pseudo_prob(0.5, 2);
    const double b = normalized_pseudo_prob(0.9, 3);
    bool certain = true;
    for (int B = 1; B <= 10; ++B) {
        if (normalized_pseudo_prob(1.0, B) != 1.0) certain = false;
    }
    Outcome o;
    o.pass = std::abs(a - 0.375) <= 1e-12 && std::abs(b - 0.813) <= 1e-12 &&
             certain;
    o.detail = "f(0.5,2)=" + fmt(a, 17) + ", f(0.9,3)=" + fmt(b, 17) +
               ", f(1,B)=1 for B=1..10 " + (certain ? "ok" : "FAILED");
    return o;
}

// --- 8: metric oracles -------------------------------------------------------

Outcome criterion8() {
    const double ap = average_precision({1, -1, 1});
    const bool ap_ok = std::abs(ap - 5.0 / 6.0) <= 1e-9;

    std::vector<CycleRecord> flat(3);
    for (int t = 0; t < 3; ++t) {
        flat[t].n_labeled = 10 * (t + 1);
        flat[t].map = 1.0;
    }
    const double nauc = normalized_auc(flat);
    const bool nauc_ok = std::abs(nauc - 1.0) <= 1e-12;

    bool grad_ok = false;
    std::string grad_detail = "check missing";
    for (const auto& c : verify_classifiers()) {
        if (c.name == "mlp.gradient_matches_finite_differences") {
            grad_ok = c.pass;
            grad_detail = c.detail;
        }
    }
    Outcome o;
    o.pass = ap_ok && nauc_ok && grad_ok;
    o.detail = "AP [+,-,+] = " + fmt(ap, 12) + (ap_ok ? " ok" : " FAILED") +
               ", constant-curve nAUC = " + fmt(nauc, 12) +
               (nauc_ok ? " ok" : " FAILED") + ", mlp gradient " + grad_detail;
    return o;
}

// --- 9: duplicates in the pool: greedy vs top-B ------------------------------

Outcome criterion9() {
    const int B = 3;
    Dataset data;
    data.X = Mat(9, 2);
    for (int i = 0; i < 3; ++i) data.X.row(i) << 0.0, 0.0;
    for (int k = 0; k < 6; ++k) {
        const double a = k * std::acos(-1.0) / 3.0;
        data.X.row(3 + k) << 2.5 * std::cos(a), 2.5 * std::sin(a);
    }
    for (int i = 0; i < 9; ++i) {
        data.ids.push_back(i);
        data.truth.push_back(1);
    }
    data.rebuild_index();

    ExperimentConfig cfg;
    cfg.strategy = Strategy::gal_gp;
    cfg.classifier = ClassifierKind::gp;
    cfg.alpha = 1.0;
    cfg.jitter = 1e-6;

    const LabeledSet empty;
    const GpModel prior = fit_gp(Mat(0, 2), Vec(0), 2.0, 1e-6);
    std::vector<int> candidates(9);
    for (int i = 0; i < 9; ++i) candidates[i] = i;
    Rng sel_rng(0);

    cfg.selection = SelectionMode::topb;
    const BatchSelection topb = select_batch(cfg, data, empty, prior,
                                             candidates, B, 1, 0, sel_rng, 2.0);
    cfg.selection = SelectionMode::greedy;
    const BatchSelection greedy = select_batch(
        cfg, data, empty, prior, candidates, B, 1, 0, sel_rng, 2.0);

    std::vector<int> topb_sorted = topb.ids;
    std::sort(topb_sorted.begin(), topb_sorted.end());
    const bool topb_all_dups = topb_sorted == std::vector<int>{0, 1, 2};

    int greedy_dups = 0;
    for (int id : greedy.ids) {
        if (id < 3) ++greedy_dups;
    }
    const auto join = [](const std::vector<int>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(xs[i]);
        }
        return s;
    };
    Outcome o;
    o.pass = topb_all_dups && greedy_dups <= 1 &&
             static_cast<int>(greedy.ids.size()) == B;
    o.detail = "top-B picked {" + join(topb.ids) + "} (all 3 duplicates " +
               (topb_all_dups ? "yes" : "NO") + "), greedy picked {" +
               join(greedy.ids) + "} (" + std::to_string(greedy_dups) +
               " duplicate)";
    return o;
}

// --- 10: per-cycle runtime follows a cubic (informational) -------------------

Outcome criterion10() {
    ExperimentConfig cfg;
    cfg.toy.n_pos = 100;
    cfg.toy.n_neg = 400;
    cfg.strategy = Strategy::gal_gp;
    cfg.classifier = ClassifierKind::gp;
    cfg.K = 150;
    cfg.schedule = {{20, 3}};
    const LearningCurve curve = run_al_experiment(cfg, 0);
    std::vector<double> secs;
    for (const auto& r : curve.records) {
        if (!r.batch_ids.empty()) secs.push_back(r.wall_s);
    }
    const RuntimeTrend t = runtime_trend(secs);
    Outcome o;
    o.blocking = false;
    o.pass = t.r2 >= 0.9;
    o.detail = "cubic fit over " + std::to_string(secs.size()) +
               " cycles, R^2 = " + fmt(t.r2) + " (informational)";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    if (argc > 1) {
        const int k = std::atoi(argv[1]);
        if (k < 1 || k > 10) {
            std::cerr << "usage: acceptance [1..10]\n";
            return 2;
        }
        which.push_back(k);
    } else {
        for (int k = 1; k <= 10; ++k) which.push_back(k);
    }

    Outcome (*checks[])() = {criterion1, criterion2, criterion3, criterion4,
                             criterion5, criterion6, criterion7, criterion8,
                             criterion9, criterion10};
    bool blocking_failure = false;
    for (int k : which) {
        Outcome o;
        try {
            o = checks[k - 1]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL")
                  << " — " << o.detail << "\n";
        if (!o.pass && o.blocking) blocking_failure = true;
    }
    return blocking_failure ? 1 : 0;
}

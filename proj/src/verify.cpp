#include "gal/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gal/acquisition.hpp"
#include "gal/classifiers.hpp"
#include "gal/data.hpp"
#include "gal/gp.hpp"
#include "gal/harness.hpp"
#include "gal/selection.hpp"

namespace gal {

namespace {

void add_check(std::vector<CheckResult>& out, const std::string& name,
               bool pass, const std::string& detail = "") {
    out.push_back({name, pass, detail});
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

// Plain Gauss-Jordan inverse, kept free of Eigen decompositions so the GP
// check has an independent reference path.
std::vector<std::vector<double>> gj_inverse(std::vector<std::vector<double>> a) {
    const int n = static_cast<int>(a.size());
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        std::swap(inv[col], inv[pivot]);
        const double p = a[col][col];
        if (p == 0.0) throw NumericError("gj_inverse: singular matrix");
        for (int c = 0; c < n; ++c) {
            a[col][c] /= p;
            inv[col][c] /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            if (f == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

Mat random_points(Rng& rng, int n, int d, double scale) {
    return Mat::NullaryExpr(
        n, d, [&](Eigen::Index, Eigen::Index) { return scale * rng.normal(); });
}

}  // namespace

GpInstance random_gp_instance(Rng& rng, int max_pool, int max_base) {
    GpInstance inst;
    const int d = 1 + static_cast<int>(rng.uniform_int(3));
    const int n_pool = 4 + static_cast<int>(rng.uniform_int(max_pool - 3));
    const int n_base = static_cast<int>(rng.uniform_int(max_base + 1));
    inst.X_base = random_points(rng, n_base, d, 2.0);
    inst.X_cand = random_points(rng, n_pool, d, 2.0);
    inst.gamma = 0.3 + 2.7 * rng.uniform();
    inst.alpha = 1.0;
    return inst;
}

double instance_objective(const GpInstance& inst,
                          const std::vector<int>& subset) {
    Mat X_A(subset.size(), inst.X_cand.cols());
    for (std::size_t i = 0; i < subset.size(); ++i) {
        X_A.row(i) = inst.X_cand.row(subset[i]);
    }
    return set_objective(inst.X_base, X_A, inst.X_cand, inst.gamma, inst.alpha);
}

std::vector<int> instance_greedy(const GpInstance& inst, int B) {
    std::vector<int> chosen;
    std::vector<int> remaining(inst.X_cand.rows());
    for (std::size_t i = 0; i < remaining.size(); ++i) {
        remaining[i] = static_cast<int>(i);
    }
    for (int step = 0; step < B && !remaining.empty(); ++step) {
        int best = -1;
        double best_gain = 0.0;
        const double f_cur = instance_objective(inst, chosen);
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            std::vector<int> trial = chosen;
            trial.push_back(remaining[i]);
            const double gain = instance_objective(inst, trial) - f_cur;
            if (best == -1 || gain > best_gain + 1e-12) {
                best = static_cast<int>(i);
                best_gain = gain;
            }
        }
        chosen.push_back(remaining[best]);
        remaining.erase(remaining.begin() + best);
    }
    return chosen;
}

std::vector<CheckResult> verify_gp(std::uint64_t seed) {
    std::vector<CheckResult> out;
    Rng rng(seed);

    // Posterior equals the naive conditional Gaussian computed by
    // Gauss-Jordan inversion. The jitter here is larger than the default:
    // near-duplicate rows push cond(K11) toward 1/jitter, and both paths
    // lose ~eps*cond digits, so 1e-6 cannot hold a 1e-8 agreement.
    double worst = 0.0;
    for (int it = 0; it < 25; ++it) {
        const int d = 1 + static_cast<int>(rng.uniform_int(3));
        const int n = 1 + static_cast<int>(rng.uniform_int(8));
        const int m = 1 + static_cast<int>(rng.uniform_int(5));
        const double gamma = 0.5 + 2.5 * rng.uniform();
        const double jitter = 1e-4;
        const Mat Xtr = random_points(rng, n, d, 1.5);
        const Mat Xte = random_points(rng, m, d, 1.5);
        Vec y(n);
        for (int i = 0; i < n; ++i) y[i] = rng.normal();

        const GpPosterior post = gp_posterior(Xtr, y, Xte, gamma, jitter);

        const Mat K11 = kernel_matrix(Xtr, Xtr, gamma);
        const Mat K12 = kernel_matrix(Xtr, Xte, gamma);
        const Mat K22 = kernel_matrix(Xte, Xte, gamma);
        std::vector<std::vector<double>> a(n, std::vector<double>(n));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                a[i][j] = K11(i, j) + (i == j ? jitter : 0.0);
            }
        }
        const auto inv = gj_inverse(a);
        Mat K11inv(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) K11inv(i, j) = inv[i][j];
        }
        const Vec mean_ref = K12.transpose() * K11inv * y;
        const Mat cov_ref = K22 - K12.transpose() * K11inv * K12;
        worst = std::max(worst, (post.mean - mean_ref).cwiseAbs().maxCoeff());
        worst = std::max(worst,
                         (post.cov - cov_ref).cwiseAbs().maxCoeff());
    }
    add_check(out, "gp.posterior_matches_naive_oracle", worst <= 1e-8,
              "max deviation " + fmt(worst));

    // Variance at a train point stays within twice the jitter.
    double worst_var = 0.0;
    for (int it = 0; it < 10; ++it) {
        const int n = 2 + static_cast<int>(rng.uniform_int(6));
        const Mat X = random_points(rng, n, 2, 2.0);
        Vec y(n);
        for (int i = 0; i < n; ++i) y[i] = rng.normal();
        const GpPosterior post = gp_posterior(X, y, X, 1.0, 1e-6);
        worst_var = std::max(worst_var, post.variance().maxCoeff());
    }
    add_check(out, "gp.train_point_variance_le_2jitter", worst_var <= 2e-6,
              "max train-point variance " + fmt(worst_var));

    // Empty train set gives the prior.
    {
        const Mat Xte = random_points(rng, 4, 2, 1.0);
        const GpPosterior post =
            gp_posterior(Mat(0, 2), Vec(0), Xte, 1.0, 1e-6);
        const bool mean_ok = post.mean.cwiseAbs().maxCoeff() == 0.0;
        const bool var_ok =
            (post.variance().array() - 1.0).abs().maxCoeff() <= 1e-12;
        add_check(out, "gp.empty_train_is_prior", mean_ok && var_ok);
    }

    // Adding points never increases the set objective's variance mass.
    {
        bool ok = true;
        for (int it = 0; it < 10 && ok; ++it) {
            GpInstance inst = random_gp_instance(rng);
            std::vector<int> subset;
            double prev = instance_objective(inst, subset);
            for (int k = 0; k < std::min<int>(3, inst.X_cand.rows()); ++k) {
                subset.push_back(k);
                const double cur = instance_objective(inst, subset);
                if (cur < prev - 1e-9) {
                    ok = false;
                    break;
                }
                prev = cur;
            }
        }
        add_check(out, "gp.set_objective_monotone_spotcheck", ok);
    }

    // Diminishing returns across nested subsets: gain(S, x) >= gain(T, x)
    // for S subset of T. Sampled over random instances and random chains.
    {
        const int n_triples = 240;
        int violations = 0;
        double worst_margin = 0.0;
        std::string first_case;
        for (int it = 0; it < n_triples; ++it) {
            const GpInstance inst = random_gp_instance(rng);
            const int n = static_cast<int>(inst.X_cand.rows());
            std::vector<int> ids(n);
            for (int i = 0; i < n; ++i) ids[i] = i;
            rng.shuffle(ids);
            const int n_t = 1 + static_cast<int>(rng.uniform_int(n - 1));
            const int n_s = static_cast<int>(rng.uniform_int(n_t));
            std::vector<int> T(ids.begin(), ids.begin() + n_t);
            std::vector<int> S(ids.begin(), ids.begin() + n_s);
            const int x = ids[n - 1];

            auto gain = [&](std::vector<int> base) {
                const double f0 = instance_objective(inst, base);
                base.push_back(x);
                return instance_objective(inst, base) - f0;
            };
            const double margin = gain(S) - gain(T);
            if (margin < -1e-8) {
                ++violations;
                worst_margin = std::min(worst_margin, margin);
                if (first_case.empty()) {
                    std::ostringstream ss;
                    ss << "first: |S|=" << n_s << " |T|=" << n_t << " x=" << x
                       << " gamma=" << fmt(inst.gamma)
                       << " margin=" << fmt(margin) << " seed=" << seed
                       << " iter=" << it;
                    first_case = ss.str();
                }
            }
        }
        std::string detail = std::to_string(n_triples - violations) + "/" +
                             std::to_string(n_triples) +
                             ", worst margin " + fmt(worst_margin);
        if (!first_case.empty()) detail += "; " + first_case;
        add_check(out, "gp.diminishing_returns", violations == 0, detail);
    }
    return out;
}

std::vector<CheckResult> verify_greedy(std::uint64_t seed) {
    std::vector<CheckResult> out;
    Rng rng(seed);

    // (1 - 1/e) bound against brute force on small instances.
    int bound_ok = 0;
    const int n_inst = 20;
    double worst_margin = 1e9;
    for (int it = 0; it < n_inst; ++it) {
        const GpInstance inst = random_gp_instance(rng);
        const int B = 1 + static_cast<int>(rng.uniform_int(3));
        const double f_empty = instance_objective(inst, {});
        const std::vector<int> greedy = instance_greedy(inst, B);
        const double f_greedy = instance_objective(inst, greedy);

        std::vector<int> all_idx(inst.X_cand.rows());
        for (std::size_t i = 0; i < all_idx.size(); ++i) {
            all_idx[i] = static_cast<int>(i);
        }
        const OptimalBatch opt = brute_force_optimal_batch(
            all_idx, B, [&](const std::vector<int>& s) {
                return instance_objective(inst, s);
            });
        const double lhs = f_greedy - f_empty;
        const double rhs = (1.0 - std::exp(-1.0)) * (opt.value - f_empty);
        worst_margin = std::min(worst_margin, lhs - rhs);
        if (lhs >= rhs - 1e-8) ++bound_ok;
    }
    add_check(out, "greedy.bound_1_minus_1_over_e", bound_ok == n_inst,
              std::to_string(bound_ok) + "/" + std::to_string(n_inst) +
                  ", worst margin " + fmt(worst_margin));

    // Monotonicity of the set objective on random chains.
    {
        bool ok = true;
        double worst = 0.0;
        for (int it = 0; it < 40; ++it) {
            const GpInstance inst = random_gp_instance(rng);
            const int n = static_cast<int>(inst.X_cand.rows());
            std::vector<int> ids(n);
            for (int i = 0; i < n; ++i) ids[i] = i;
            rng.shuffle(ids);
            std::vector<int> s(ids.begin(),
                               ids.begin() + rng.uniform_int(n / 2) + 1);
            const int x = ids[n - 1];
            const double f_s = instance_objective(inst, s);
            std::vector<int> sx = s;
            sx.push_back(x);
            const double f_sx = instance_objective(inst, sx);
            worst = std::min(worst, f_sx - f_s);
            if (f_sx < f_s - 1e-8) ok = false;
        }
        add_check(out, "greedy.monotone_gain", ok, "worst gain " + fmt(worst));
    }

    // Deterministic tie-break toward the lower id.
    {
        LabeledSet empty;
        ImpactFn fn = [](const LabeledSet&, const std::vector<int>& remaining) {
            std::vector<ImpactResult> r(remaining.size());
            for (auto& e : r) {
                e.impact = 1.0;
                e.pseudo_label = -1;
            }
            return r;
        };
        const BatchSelection sel = gal_greedy({7, 3, 9, 5}, 2, fn, empty);
        add_check(out, "greedy.tie_breaks_to_lower_id",
                  sel.ids == std::vector<int>{3, 5});
    }
    return out;
}

std::vector<CheckResult> verify_classifiers(std::uint64_t seed) {
    std::vector<CheckResult> out;
    Rng rng(seed);

    // Duality gap and KKT conditions on random problems.
    bool gap_ok = true;
    bool kkt_ok = true;
    for (int it = 0; it < 15; ++it) {
        const int n = 6 + static_cast<int>(rng.uniform_int(30));
        const int d = 1 + static_cast<int>(rng.uniform_int(5));
        Mat X = random_points(rng, n, d, 1.5);
        Vec y(n);
        for (int i = 0; i < n; ++i) {
            y[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
            X(i, 0) += 0.8 * y[i];
        }
        if ((y.array() == y[0]).all()) y[0] = -y[0];
        SvmOptions opts;
        opts.c_reg = 0.25 + 3.0 * rng.uniform();
        const SvmModel m = fit_svm(X, y, opts);
        if (!m.converged) gap_ok = false;

        for (int i = 0; i < n; ++i) {
            const double margin = y[i] * (m.w.dot(X.row(i)) + m.b);
            const double a = m.alpha[i];
            if (a <= 1e-9 && margin < 1.0 - 1e-2) kkt_ok = false;
            if (a >= opts.c_reg - 1e-9 && margin > 1.0 + 1e-2) kkt_ok = false;
            if (a > 1e-9 && a < opts.c_reg - 1e-9 &&
                std::abs(margin - 1.0) > 1e-2) {
                kkt_ok = false;
            }
        }
    }
    add_check(out, "svm.duality_gap_convergence", gap_ok);
    add_check(out, "svm.kkt_conditions", kkt_ok);

    // Well-separated toy has zero training errors.
    {
        ToyConfig tc;
        tc.stddev = 0.5;
        tc.seed = 7;
        const ToyResult toy = generate_gaussian_toy(tc);
        const Vec y = Eigen::Map<const Eigen::VectorXi>(toy.dataset.truth.data(),
                                                        toy.dataset.truth.size())
                          .cast<double>();
        const SvmModel m = fit_svm(toy.dataset.X, y);
        int errors = 0;
        for (int i = 0; i < toy.dataset.n(); ++i) {
            if (y[i] * m.score(toy.dataset.X.row(i)) <= 0.0) ++errors;
        }
        add_check(out, "svm.separable_toy_zero_errors", errors == 0,
                  std::to_string(errors) + " errors");
    }

    // Single-class fallback formula.
    {
        Mat X(3, 2);
        X << 1, 2, 3, 4, 5, 0;
        Vec y = Vec::Ones(3);
        const SvmModel m = fit_svm(X, y);
        const Vec mu = X.colwise().mean();
        const bool ok = m.degenerate && (m.w - mu).norm() == 0.0 &&
                        m.b == -mu.squaredNorm() / 2.0;
        add_check(out, "svm.single_class_centroid_fallback", ok);
    }

    // MLP gradient against central finite differences.
    {
        const int n = 12, d = 3;
        Mat X = random_points(rng, n, d, 1.0);
        Vec y(n);
        for (int i = 0; i < n; ++i) y[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
        MlpOptions opts;
        opts.epochs = 5;
        opts.seed = 11;
        const MlpModel m = fit_mlp(X, y, opts);
        const Vec grad = mlp_gradient(m, X, y);
        Vec theta = m.theta();
        Vec fd(theta.size());
        const double eps = 1e-6;
        MlpModel probe = m;
        for (int k = 0; k < theta.size(); ++k) {
            Vec tp = theta, tm = theta;
            tp[k] += eps;
            tm[k] -= eps;
            probe.load_theta(tp);
            const double lp = mlp_loss(probe, X, y);
            probe.load_theta(tm);
            const double lm = mlp_loss(probe, X, y);
            fd[k] = (lp - lm) / (2.0 * eps);
        }
        const double rel =
            (grad - fd).norm() / std::max(grad.norm(), fd.norm());
        add_check(out, "mlp.gradient_matches_finite_differences", rel < 1e-4,
                  "relative error " + fmt(rel));
    }

    // Deterministic refits.
    {
        Mat X = random_points(rng, 20, 3, 1.0);
        Vec y(20);
        for (int i = 0; i < 20; ++i) y[i] = i % 2 == 0 ? 1.0 : -1.0;
        const SvmModel a = fit_svm(X, y);
        const SvmModel b = fit_svm(X, y);
        add_check(out, "svm.deterministic_refit",
                  (a.theta() - b.theta()).norm() == 0.0);
    }
    return out;
}

std::vector<CheckResult> verify_metrics() {
    std::vector<CheckResult> out;

    add_check(out, "metrics.ap_plus_minus_plus",
              std::abs(average_precision({1, -1, 1}) - 5.0 / 6.0) <= 1e-12);
    add_check(out, "metrics.ap_all_relevant",
              average_precision({1, 1, 1}) == 1.0);
    add_check(out, "metrics.ap_none_relevant",
              average_precision({-1, -1}) == 0.0);

    // Relevant-last is the permutation minimum for a fixed composition.
    {
        std::vector<int> flags = {1, 1, -1, -1, -1, -1};
        std::sort(flags.begin(), flags.end());
        double min_ap = 1e9;
        std::vector<int> perm = flags;
        std::sort(perm.begin(), perm.end());
        do {
            min_ap = std::min(min_ap, average_precision(perm));
        } while (std::next_permutation(perm.begin(), perm.end()));
        const std::vector<int> worst = {-1, -1, -1, -1, 1, 1};
        add_check(out, "metrics.ap_relevant_last_is_minimum",
                  std::abs(average_precision(worst) - min_ap) <= 1e-12,
                  "min " + fmt(min_ap));
    }

    auto curve_of = [](std::vector<std::pair<int, double>> pts) {
        std::vector<CycleRecord> recs;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            CycleRecord r;
            r.cycle = static_cast<int>(i);
            r.n_labeled = pts[i].first;
            r.map = pts[i].second;
            recs.push_back(r);
        }
        return recs;
    };

    {
        const auto recs = curve_of({{5, 1.0}, {10, 1.0}, {15, 1.0}});
        add_check(out, "metrics.nauc_constant_one",
                  std::abs(normalized_auc(recs) - 1.0) <= 1e-12);
        const auto c = curve_of({{5, 0.37}, {10, 0.37}, {15, 0.37}});
        const bool any_range =
            std::abs(normalized_auc(c, 0.0, 100.0) - 0.37) <= 1e-12 &&
            std::abs(normalized_auc(c, 7.0, 12.0) - 0.37) <= 1e-12;
        add_check(out, "metrics.nauc_constant_c_any_range", any_range);
        const auto lin = curve_of({{0, 0.0}, {10, 1.0}});
        add_check(out, "metrics.nauc_linear_half",
                  std::abs(normalized_auc(lin) - 0.5) <= 1e-12);
        const auto single = curve_of({{4, 0.8}});
        add_check(out, "metrics.nauc_single_point",
                  std::abs(normalized_auc(single) - 0.8) <= 1e-12);
        bool threw = false;
        try {
            normalized_auc(recs, 100.0, 200.0);
        } catch (const ConfigError&) {
            threw = true;
        }
        add_check(out, "metrics.nauc_disjoint_range_errors", threw);

        // Trapezoid consistency under interpolated midpoints.
        const auto coarse = curve_of({{0, 0.2}, {10, 0.6}, {20, 0.4}});
        const auto fine =
            curve_of({{0, 0.2}, {5, 0.4}, {10, 0.6}, {15, 0.5}, {20, 0.4}});
        add_check(out, "metrics.nauc_interpolation_invariant",
                  std::abs(normalized_auc(coarse) - normalized_auc(fine)) <=
                      1e-12);
    }

    add_check(out, "metrics.pseudo_prob_half_two",
              std::abs(normalized_pseudo_prob(0.5, 2) - 0.375) <= 1e-12);
    add_check(out, "metrics.pseudo_prob_point9_three",
              std::abs(normalized_pseudo_prob(0.9, 3) - 0.813) <= 1e-12);
    {
        bool ok = true;
        for (int B = 1; B <= 10; ++B) {
            if (normalized_pseudo_prob(1.0, B) != 1.0) ok = false;
        }
        add_check(out, "metrics.pseudo_prob_certain", ok);
    }

    {
        std::vector<double> ys;
        for (int i = 0; i < 12; ++i) {
            const double x = i;
            ys.push_back(2.0 + 0.1 * x - 0.01 * x * x + 0.003 * x * x * x);
        }
        const RuntimeTrend t = runtime_trend(ys);
        add_check(out, "metrics.runtime_trend_exact_cubic",
                  t.r2 >= 1.0 - 1e-9, "r2 " + fmt(t.r2));
    }
    return out;
}

std::vector<CheckResult> run_verify_scope(const std::string& scope) {
    std::vector<CheckResult> out;
    const bool all = scope == "all";
    if (all || scope == "gp") {
        auto r = verify_gp();
        out.insert(out.end(), r.begin(), r.end());
    }
    if (all || scope == "greedy") {
        auto r = verify_greedy();
        out.insert(out.end(), r.begin(), r.end());
    }
    if (all || scope == "classifiers") {
        auto r = verify_classifiers();
        out.insert(out.end(), r.begin(), r.end());
    }
    if (all || scope == "metrics") {
        auto r = verify_metrics();
        out.insert(out.end(), r.begin(), r.end());
    }
    if (out.empty()) {
        throw ConfigError("unknown verify scope '" + scope +
                          "' (valid: gp, greedy, classifiers, metrics, all)");
    }
    return out;
}

}  // namespace gal

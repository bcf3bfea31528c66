#include "gal/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gal/rng.hpp"

namespace gal {

namespace {

constexpr double kTieTol = 1e-10;

// Train set extended by one probe point.
void extend(const Mat& X_l, const Vec& y_l, const Vec& x, double label,
            Mat& X_ext, Vec& y_ext) {
    const int n = static_cast<int>(X_l.rows());
    X_ext.resize(n + 1, x.size());
    if (n > 0) X_ext.topRows(n) = X_l;
    X_ext.row(n) = x.transpose();
    y_ext.resize(n + 1);
    if (n > 0) y_ext.head(n) = y_l;
    y_ext[n] = label;
}

}  // namespace

ImpactResult make_impact(double f_minus, double f_plus) {
    ImpactResult r;
    r.f_minus = f_minus;
    r.f_plus = f_plus;
    if (f_minus <= f_plus + kTieTol) {
        r.impact = f_minus;
        r.pseudo_label = -1;
    } else {
        r.impact = f_plus;
        r.pseudo_label = 1;
    }
    return r;
}

Vec psi_svm(const SvmModel& m, bool include_bias) {
    return include_bias ? m.theta() : m.w;
}

Vec psi_mlp(const MlpModel& m) { return m.theta(); }

ImpactResult svm_impact(const Vec& x, const Mat& X_l, const Vec& y_l,
                        const SvmModel& base, const SvmOptions& opts,
                        bool include_bias) {
    const Vec psi0 = psi_svm(base, include_bias);
    Mat X_ext;
    Vec y_ext;
    double f[2];
    const double labels[2] = {-1.0, 1.0};
    for (int k = 0; k < 2; ++k) {
        extend(X_l, y_l, x, labels[k], X_ext, y_ext);
        const SvmModel m = fit_svm(X_ext, y_ext, opts);
        f[k] = (psi_svm(m, include_bias) - psi0).squaredNorm();
    }
    return make_impact(f[0], f[1]);
}

ImpactResult mlp_impact(const Vec& x, const Mat& X_l, const Vec& y_l,
                        const MlpModel& base, const MlpOptions& opts) {
    const Vec psi0 = psi_mlp(base);
    Mat X_ext;
    Vec y_ext;
    double f[2];
    const double labels[2] = {-1.0, 1.0};
    for (int k = 0; k < 2; ++k) {
        extend(X_l, y_l, x, labels[k], X_ext, y_ext);
        const MlpModel m = fit_mlp(X_ext, y_ext, opts, &base);
        f[k] = (psi_mlp(m) - psi0).norm();
    }
    return make_impact(f[0], f[1]);
}

double entropy_score(double p) {
    if (p < 0.0 || p > 1.0) throw NumericError("entropy: p outside [0,1]");
    double h = 0.0;
    if (p > 0.0) h -= p * std::log(p);
    if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
    return h;
}

double cod_score(double p_now, double p_prev) { return std::abs(p_now - p_prev); }

double maximin_score(const Vec& x, const Mat& X_l, const Vec& y_l,
                     const SvmOptions& opts, bool include_bias) {
    Mat X_ext;
    Vec y_ext;
    double best = std::numeric_limits<double>::infinity();
    for (double label : {-1.0, 1.0}) {
        extend(X_l, y_l, x, label, X_ext, y_ext);
        const SvmModel m = fit_svm(X_ext, y_ext, opts);
        best = std::min(best, psi_svm(m, include_bias).squaredNorm());
    }
    return best;
}

double rbmal_score(const Vec& x, const Mat& X_l, double p, int n_unlabeled,
                   int n_labeled) {
    if (n_unlabeled + n_labeled == 0) throw DataError("rbmal: empty problem");
    const double mix =
        static_cast<double>(n_unlabeled) / (n_unlabeled + n_labeled);
    const double xn = x.norm();
    if (xn == 0.0) throw NumericError("rbmal: zero-norm candidate");
    double phi = -1.0;
    for (int i = 0; i < X_l.rows(); ++i) {
        const double ln = X_l.row(i).norm();
        if (ln == 0.0) throw NumericError("rbmal: zero-norm labeled vector");
        phi = std::max(phi, X_l.row(i).dot(x) / (ln * xn));
    }
    if (X_l.rows() == 0) phi = 0.0;
    const double u = 1.0 - std::abs(2.0 * p - 1.0);
    return mix * (1.0 - phi) + (1.0 - mix) * u;
}

double posterior_uncertainty_score(double mean, double variance) {
    return std::sqrt(std::max(variance, 0.0)) - std::abs(mean);
}

namespace {

std::vector<int> kmeanspp_select(const Mat& X, int B, std::uint64_t seed) {
    const int n = static_cast<int>(X.rows());
    Rng rng(seed);

    // k-means++ seeding.
    Mat centroids(B, X.cols());
    centroids.row(0) = X.row(static_cast<int>(rng.uniform_int(n)));
    Vec d2(n);
    for (int i = 0; i < n; ++i) {
        d2[i] = (X.row(i) - centroids.row(0)).squaredNorm();
    }
    for (int c = 1; c < B; ++c) {
        const double total = d2.sum();
        int pick = 0;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<int>(rng.uniform_int(n));
        }
        centroids.row(c) = X.row(pick);
        for (int i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], (X.row(i) - centroids.row(c)).squaredNorm());
        }
    }

    // Lloyd refinement.
    std::vector<int> assign(n, -1);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bestd = (X.row(i) - centroids.row(0)).squaredNorm();
            for (int c = 1; c < B; ++c) {
                const double d = (X.row(i) - centroids.row(c)).squaredNorm();
                if (d < bestd) {
                    bestd = d;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        if (!changed) break;
        for (int c = 0; c < B; ++c) {
            Vec sum = Vec::Zero(X.cols());
            int count = 0;
            for (int i = 0; i < n; ++i) {
                if (assign[i] == c) {
                    sum += X.row(i).transpose();
                    ++count;
                }
            }
            if (count > 0) centroids.row(c) = sum.transpose() / count;
        }
    }

    // Nearest distinct pool row per centroid, lowest index on ties.
    std::vector<int> out;
    std::vector<char> taken(n, 0);
    for (int c = 0; c < B; ++c) {
        int best = -1;
        double bestd = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (taken[i]) continue;
            const double d = (X.row(i) - centroids.row(c)).squaredNorm();
            if (d < bestd - kTieTol || (std::abs(d - bestd) <= kTieTol &&
                                        (best == -1 || i < best))) {
                bestd = d;
                best = i;
            }
        }
        taken[best] = 1;
        out.push_back(best);
    }
    return out;
}

std::vector<int> coreset_select(const Mat& X, int B) {
    const int n = static_cast<int>(X.rows());

    // Medoid: row minimizing the summed distance to all others.
    int medoid = 0;
    double best_sum = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += (X.row(i) - X.row(j)).norm();
        if (s < best_sum - kTieTol) {
            best_sum = s;
            medoid = i;
        }
    }

    std::vector<int> out{medoid};
    std::vector<char> taken(n, 0);
    taken[medoid] = 1;
    Vec mind(n);
    for (int i = 0; i < n; ++i) mind[i] = (X.row(i) - X.row(medoid)).norm();
    while (static_cast<int>(out.size()) < B) {
        int far = -1;
        double fard = -1.0;
        for (int i = 0; i < n; ++i) {
            if (taken[i]) continue;
            if (far == -1 || mind[i] > fard + kTieTol) {
                fard = mind[i];
                far = i;
            }
        }
        taken[far] = 1;
        out.push_back(far);
        for (int i = 0; i < n; ++i) {
            mind[i] = std::min(mind[i], (X.row(i) - X.row(far)).norm());
        }
    }
    return out;
}

}  // namespace

std::vector<int> diversity_select(const Mat& X_pool, int B, DiversityMode mode,
                                  std::uint64_t seed) {
    const int n = static_cast<int>(X_pool.rows());
    if (B <= 0) throw ConfigError("diversity_select: B must be positive");
    if (B > n) throw ConfigError("diversity_select: B exceeds pool size");
    return mode == DiversityMode::kmeanspp ? kmeanspp_select(X_pool, B, seed)
                                           : coreset_select(X_pool, B);
}

}  // namespace gal

#pragma once

#include <cstdint>
#include <vector>

#include "gal/classifiers.hpp"
#include "gal/types.hpp"

namespace gal {

// Outcome of probing one candidate with both labels. The impact is the
// minimum of the two weight shifts; the pseudo-label is the minimizing
// label, ties (within 1e-10) resolved to -1.
struct ImpactResult {
    double f_minus = 0.0;
    double f_plus = 0.0;
    double impact = 0.0;
    int pseudo_label = -1;
};

ImpactResult make_impact(double f_minus, double f_plus);

// Flat parameter vectors fed to the weight-shift norms.
Vec psi_svm(const SvmModel& m, bool include_bias = true);
Vec psi_mlp(const MlpModel& m);

// Squared L2 shift of the refit SVM weights against `base` for both labels.
ImpactResult svm_impact(const Vec& x, const Mat& X_l, const Vec& y_l,
                        const SvmModel& base, const SvmOptions& opts = {},
                        bool include_bias = true);

// L2 (not squared) shift of the warm-started MLP weights against `base`.
ImpactResult mlp_impact(const Vec& x, const Mat& X_l, const Vec& y_l,
                        const MlpModel& base, const MlpOptions& opts = {});

// Binary entropy in nats; 0 log 0 = 0.
double entropy_score(double p);

// Change-of-decision: absolute probability shift between consecutive cycles.
double cod_score(double p_now, double p_prev);

// min over labels of |W(x,l)|^2 — the weight-norm variant without a baseline.
double maximin_score(const Vec& x, const Mat& X_l, const Vec& y_l,
                     const SvmOptions& opts = {}, bool include_bias = true);

// Ranked batch-mode score: alpha (1 - phi) + (1 - alpha) u with
// alpha = n_unlabeled / (n_unlabeled + n_labeled), phi the max cosine
// similarity to the labeled set, u = 1 - |2p - 1|.
double rbmal_score(const Vec& x, const Mat& X_l, double p, int n_unlabeled,
                   int n_labeled);

// Posterior-uncertainty score sigma - |mu| from a GP posterior.
double posterior_uncertainty_score(double mean, double variance);

enum class DiversityMode { kmeanspp, coreset };

// Chooses B diverse rows of X_pool. kmeanspp runs seeded k-means++ plus
// Lloyd refinement and returns the pool row nearest each centroid; coreset
// runs farthest-first traversal seeded at the pool medoid.
std::vector<int> diversity_select(const Mat& X_pool, int B, DiversityMode mode,
                                  std::uint64_t seed = 0);

}  // namespace gal

#pragma once

#include "gal/classifiers.hpp"
#include "gal/types.hpp"

namespace gal {

// Squared exponential kernel k(x,x') = exp(-|x-x'|^2 / (2 gamma^2)).
Mat kernel_matrix(const Mat& A, const Mat& B, double gamma);

// Median pairwise Euclidean distance; the usual length-scale heuristic.
double median_pairwise_distance(const Mat& X);

struct GpPosterior {
    Vec mean;
    Mat cov;
    double jitter_used = 0.0;

    Vec variance() const { return cov.diagonal(); }
};

// Conditional Gaussian at X_test given (X_train, y_train). An empty train
// set yields the prior (zero mean, unit variance). The train-diagonal jitter
// escalates tenfold on Cholesky failure up to 1e-2 before raising
// NumericError.
GpPosterior gp_posterior(const Mat& X_train, const Vec& y_train,
                         const Mat& X_test, double gamma,
                         double jitter = 1e-6);

// Variance-reduction set objective over a fixed candidate pool X_c:
// F(A) = -( sum_{x in X_c} var_{base+A}(x) + alpha * max_{x in X_c} var_{base+A}(x) ).
// Label-free: only the geometry of base + A enters.
double set_objective(const Mat& X_base, const Mat& X_A, const Mat& X_c,
                     double gamma, double alpha = 1.0, double jitter = 1e-6);

// Marginal gain F(A + {x}) - F(A) of adding one candidate.
double gp_impact(const Vec& x, const Mat& X_base, const Mat& X_A,
                 const Mat& X_c, double gamma, double alpha = 1.0,
                 double jitter = 1e-6);

// GP regression model with a cached Cholesky factor so that per-point
// posterior queries are cheap. An empty train set is the prior.
struct GpModel : ParametricModel {
    Mat X_train;
    double gamma = 1.0;
    double jitter_used = 0.0;

    Vec theta() const override {
        throw ConfigError("gp model exposes no flat weight vector");
    }
    double score(const Vec& x) const override;         // posterior mean
    double predict_proba(const Vec& x) const override; // logistic(mean)
    double variance(const Vec& x) const;

    Mat L;       // lower Cholesky factor of K11 + jitter I
    Vec coef;    // (K11 + jitter I)^{-1} y
};

GpModel fit_gp(const Mat& X_train, const Vec& y_train, double gamma,
               double jitter = 1e-6);

}  // namespace gal

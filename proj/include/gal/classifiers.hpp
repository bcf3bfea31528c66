#pragma once

#include <cstdint>

#include "gal/types.hpp"

namespace gal {

// Trained classifier exposing a flat weight vector and per-sample scores.
struct ParametricModel {
    virtual ~ParametricModel() = default;
    virtual Vec theta() const = 0;
    virtual double score(const Vec& x) const = 0;
    virtual double predict_proba(const Vec& x) const = 0;
};

struct SvmOptions {
    double c_reg = 1.0;
    double tol = 1e-6;       // duality-gap stopping threshold
    int max_sweeps = 200000;
};

// L2-regularized hinge-loss linear SVM trained by dual coordinate descent
// with the bias handled as an always-one augmented feature.
struct SvmModel : ParametricModel {
    Vec w;
    double b = 0.0;
    Vec alpha;               // dual variables, empty for the degenerate fit
    bool degenerate = false; // single-class fallback was used
    bool converged = true;
    int sweeps = 0;

    Vec theta() const override;              // [w; b]
    double score(const Vec& x) const override { return w.dot(x) + b; }
    double predict_proba(const Vec& x) const override;
};

// Labels must be -1/+1. A single-class train set falls back to the
// nearest-centroid rule w = y*mu, b = -y*|mu|^2/2 and sets `degenerate`.
SvmModel fit_svm(const Mat& X, const Vec& y, const SvmOptions& opts = {});

struct MlpOptions {
    int hidden = 10;
    int epochs = 50;
    double lr = 0.05;
    std::uint64_t seed = 0;
};

// Two hidden ReLU layers and a logistic output, trained with full-batch
// gradient descent on cross-entropy.
struct MlpModel : ParametricModel {
    Mat W1, W2;
    Vec b1, b2, w3;
    double b3 = 0.0;

    Vec theta() const override;              // all weights flattened
    double score(const Vec& x) const override;   // pre-sigmoid logit
    double predict_proba(const Vec& x) const override;

    int n_params() const;
    void load_theta(const Vec& t);
};

// warm_start, when given, provides the initial weights; otherwise they are
// drawn from seed. Throws NumericError naming the epoch if the loss diverges.
MlpModel fit_mlp(const Mat& X, const Vec& y, const MlpOptions& opts = {},
                 const MlpModel* warm_start = nullptr);

// Mean cross-entropy of the model on (X, y); exposed for gradient checks.
double mlp_loss(const MlpModel& m, const Mat& X, const Vec& y);

// Flat gradient of mlp_loss with respect to theta, same layout as theta().
Vec mlp_gradient(const MlpModel& m, const Mat& X, const Vec& y);

}  // namespace gal

#include "gal/classifiers.hpp"

#include <cmath>
#include <string>

#include "gal/rng.hpp"

namespace gal {

namespace {

double logistic(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

Vec SvmModel::theta() const {
    Vec t(w.size() + 1);
    t.head(w.size()) = w;
    t[w.size()] = b;
    return t;
}

double SvmModel::predict_proba(const Vec& x) const { return logistic(score(x)); }

SvmModel fit_svm(const Mat& X, const Vec& y, const SvmOptions& opts) {
    const int n = static_cast<int>(X.rows());
    const int d = static_cast<int>(X.cols());
    if (n == 0) throw DataError("fit_svm: empty train set");
    if (y.size() != n) throw DataError("fit_svm: label count mismatch");
    if (!X.allFinite() || !y.allFinite()) {
        throw NumericError("fit_svm: non-finite input");
    }
    for (int i = 0; i < n; ++i) {
        if (y[i] != -1.0 && y[i] != 1.0) {
            throw DataError("fit_svm: labels must be -1 or +1");
        }
    }

    SvmModel m;
    const bool single_class = (y.array() == y[0]).all();
    if (single_class) {
        const Vec mu = X.colwise().mean();
        m.w = y[0] * mu;
        m.b = -y[0] * mu.squaredNorm() / 2.0;
        m.degenerate = true;
        return m;
    }

    const double C = opts.c_reg;
    // Augmented representation: w_aug = [w; b], x_aug = [x; 1].
    Vec w_aug = Vec::Zero(d + 1);
    Vec alpha = Vec::Zero(n);
    Vec qdiag(n);
    for (int i = 0; i < n; ++i) qdiag[i] = X.row(i).squaredNorm() + 1.0;

    m.converged = false;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        for (int i = 0; i < n; ++i) {
            const double margin = X.row(i).dot(w_aug.head(d)) + w_aug[d];
            const double grad = y[i] * margin - 1.0;
            const double a_new =
                std::min(std::max(alpha[i] - grad / qdiag[i], 0.0), C);
            const double delta = a_new - alpha[i];
            if (delta != 0.0) {
                w_aug.head(d) += delta * y[i] * X.row(i).transpose();
                w_aug[d] += delta * y[i];
                alpha[i] = a_new;
            }
        }
        double hinge = 0.0;
        for (int i = 0; i < n; ++i) {
            const double margin = X.row(i).dot(w_aug.head(d)) + w_aug[d];
            hinge += std::max(0.0, 1.0 - y[i] * margin);
        }
        const double wsq = w_aug.squaredNorm();
        const double primal = 0.5 * wsq + C * hinge;
        const double dual = alpha.sum() - 0.5 * wsq;
        m.sweeps = sweep + 1;
        if (primal - dual <= opts.tol) {
            m.converged = true;
            break;
        }
    }

    m.w = w_aug.head(d);
    m.b = w_aug[d];
    m.alpha = alpha;
    return m;
}

int MlpModel::n_params() const {
    return static_cast<int>(W1.size() + b1.size() + W2.size() + b2.size() +
                            w3.size() + 1);
}

Vec MlpModel::theta() const {
    Vec t(n_params());
    int at = 0;
    for (int i = 0; i < W1.rows(); ++i) {
        t.segment(at, W1.cols()) = W1.row(i);
        at += static_cast<int>(W1.cols());
    }
    t.segment(at, b1.size()) = b1;
    at += static_cast<int>(b1.size());
    for (int i = 0; i < W2.rows(); ++i) {
        t.segment(at, W2.cols()) = W2.row(i);
        at += static_cast<int>(W2.cols());
    }
    t.segment(at, b2.size()) = b2;
    at += static_cast<int>(b2.size());
    t.segment(at, w3.size()) = w3;
    at += static_cast<int>(w3.size());
    t[at] = b3;
    return t;
}

void MlpModel::load_theta(const Vec& t) {
    if (t.size() != n_params()) {
        throw ConfigError("load_theta: expected " + std::to_string(n_params()) +
                          " parameters, got " + std::to_string(t.size()));
    }
    int at = 0;
    for (int i = 0; i < W1.rows(); ++i) {
        W1.row(i) = t.segment(at, W1.cols());
        at += static_cast<int>(W1.cols());
    }
    b1 = t.segment(at, b1.size());
    at += static_cast<int>(b1.size());
    for (int i = 0; i < W2.rows(); ++i) {
        W2.row(i) = t.segment(at, W2.cols());
        at += static_cast<int>(W2.cols());
    }
    b2 = t.segment(at, b2.size());
    at += static_cast<int>(b2.size());
    w3 = t.segment(at, w3.size());
    at += static_cast<int>(w3.size());
    b3 = t[at];
}

double MlpModel::score(const Vec& x) const {
    const Vec h1 = (W1 * x + b1).cwiseMax(0.0);
    const Vec h2 = (W2 * h1 + b2).cwiseMax(0.0);
    return w3.dot(h2) + b3;
}

double MlpModel::predict_proba(const Vec& x) const { return logistic(score(x)); }

namespace {

struct MlpGrads {
    Mat dW1, dW2;
    Vec db1, db2, dw3;
    double db3 = 0.0;
    double loss = 0.0;
};

MlpGrads mlp_backward(const MlpModel& m, const Mat& X, const Vec& y) {
    const int n = static_cast<int>(X.rows());
    MlpGrads g;
    g.dW1 = Mat::Zero(m.W1.rows(), m.W1.cols());
    g.dW2 = Mat::Zero(m.W2.rows(), m.W2.cols());
    g.db1 = Vec::Zero(m.b1.size());
    g.db2 = Vec::Zero(m.b2.size());
    g.dw3 = Vec::Zero(m.w3.size());

    for (int i = 0; i < n; ++i) {
        const Vec x = X.row(i);
        const Vec a1 = m.W1 * x + m.b1;
        const Vec h1 = a1.cwiseMax(0.0);
        const Vec a2 = m.W2 * h1 + m.b2;
        const Vec h2 = a2.cwiseMax(0.0);
        const double z = m.w3.dot(h2) + m.b3;
        const double p = logistic(z);
        const double t = (y[i] + 1.0) / 2.0;

        // Cross-entropy in a numerically stable softplus form.
        g.loss += std::max(z, 0.0) - z * t + std::log1p(std::exp(-std::abs(z)));

        const double dz = p - t;
        g.dw3 += dz * h2;
        g.db3 += dz;
        Vec dh2 = dz * m.w3;
        for (int j = 0; j < dh2.size(); ++j) {
            if (a2[j] <= 0.0) dh2[j] = 0.0;
        }
        g.dW2 += dh2 * h1.transpose();
        g.db2 += dh2;
        Vec dh1 = m.W2.transpose() * dh2;
        for (int j = 0; j < dh1.size(); ++j) {
            if (a1[j] <= 0.0) dh1[j] = 0.0;
        }
        g.dW1 += dh1 * x.transpose();
        g.db1 += dh1;
    }

    const double inv_n = 1.0 / n;
    g.dW1 *= inv_n;
    g.db1 *= inv_n;
    g.dW2 *= inv_n;
    g.db2 *= inv_n;
    g.dw3 *= inv_n;
    g.db3 *= inv_n;
    g.loss *= inv_n;
    return g;
}

}  // namespace

double mlp_loss(const MlpModel& m, const Mat& X, const Vec& y) {
    return mlp_backward(m, X, y).loss;
}

Vec mlp_gradient(const MlpModel& m, const Mat& X, const Vec& y) {
    const MlpGrads g = mlp_backward(m, X, y);
    MlpModel holder = m;
    holder.W1 = g.dW1;
    holder.b1 = g.db1;
    holder.W2 = g.dW2;
    holder.b2 = g.db2;
    holder.w3 = g.dw3;
    holder.b3 = g.db3;
    return holder.theta();
}

MlpModel fit_mlp(const Mat& X, const Vec& y, const MlpOptions& opts,
                 const MlpModel* warm_start) {
    const int n = static_cast<int>(X.rows());
    const int d = static_cast<int>(X.cols());
    if (n == 0) throw DataError("fit_mlp: empty train set");
    if (y.size() != n) throw DataError("fit_mlp: label count mismatch");
    if (!X.allFinite() || !y.allFinite()) {
        throw NumericError("fit_mlp: non-finite input");
    }

    MlpModel m;
    if (warm_start != nullptr) {
        m = *warm_start;
        if (m.W1.cols() != d) {
            throw ConfigError("fit_mlp: warm start dimension mismatch");
        }
    } else {
        const int h = opts.hidden;
        Rng rng(opts.seed);
        m.W1 = Mat::NullaryExpr(h, d, [&](Eigen::Index, Eigen::Index) {
            return 0.1 * rng.normal();
        });
        m.b1 = Vec::Zero(h);
        m.W2 = Mat::NullaryExpr(h, h, [&](Eigen::Index, Eigen::Index) {
            return 0.1 * rng.normal();
        });
        m.b2 = Vec::Zero(h);
        m.w3 = Vec::NullaryExpr(h, [&](Eigen::Index) { return 0.1 * rng.normal(); });
        m.b3 = 0.0;
    }

    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
        const MlpGrads g = mlp_backward(m, X, y);
        if (!std::isfinite(g.loss)) {
            throw NumericError("fit_mlp: loss diverged at epoch " +
                               std::to_string(epoch));
        }
        m.W1 -= opts.lr * g.dW1;
        m.b1 -= opts.lr * g.db1;
        m.W2 -= opts.lr * g.dW2;
        m.b2 -= opts.lr * g.db2;
        m.w3 -= opts.lr * g.dw3;
        m.b3 -= opts.lr * g.db3;
    }
    return m;
}

}  // namespace gal

#include "gal/gp.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <vector>

namespace gal {

Mat kernel_matrix(const Mat& A, const Mat& B, double gamma) {
    if (gamma <= 0.0) throw ConfigError("kernel: gamma must be positive");
    if (A.cols() != B.cols()) throw ConfigError("kernel: dimension mismatch");
    const double inv = 1.0 / (2.0 * gamma * gamma);
    Mat K(A.rows(), B.rows());
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < B.rows(); ++j) {
            K(i, j) = std::exp(-(A.row(i) - B.row(j)).squaredNorm() * inv);
        }
    }
    return K;
}

double median_pairwise_distance(const Mat& X) {
    const int n = static_cast<int>(X.rows());
    if (n < 2) throw DataError("median_pairwise_distance: need >= 2 points");
    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            dists.push_back((X.row(i) - X.row(j)).norm());
        }
    }
    std::sort(dists.begin(), dists.end());
    const std::size_t m = dists.size();
    return (m % 2 == 1) ? dists[m / 2]
                        : 0.5 * (dists[m / 2 - 1] + dists[m / 2]);
}

GpPosterior gp_posterior(const Mat& X_train, const Vec& y_train,
                         const Mat& X_test, double gamma, double jitter) {
    const int n = static_cast<int>(X_train.rows());
    const int m = static_cast<int>(X_test.rows());
    if (y_train.size() != n) throw DataError("gp_posterior: label count mismatch");

    GpPosterior post;
    if (n == 0) {
        post.mean = Vec::Zero(m);
        post.cov = kernel_matrix(X_test, X_test, gamma);
        return post;
    }

    const Mat K11 = kernel_matrix(X_train, X_train, gamma);
    const Mat K12 = kernel_matrix(X_train, X_test, gamma);
    const Mat K22 = kernel_matrix(X_test, X_test, gamma);

    double j = jitter;
    while (true) {
        Mat K = K11;
        K.diagonal().array() += j;
        Eigen::LLT<Mat> llt(K);
        if (llt.info() == Eigen::Success) {
            const Mat L = llt.matrixL();
            const Mat V = L.triangularView<Eigen::Lower>().solve(K12);
            const Vec u = L.triangularView<Eigen::Lower>().solve(y_train);
            post.mean = V.transpose() * u;
            post.cov = K22 - V.transpose() * V;
            post.jitter_used = j;
            return post;
        }
        j *= 10.0;
        if (j > 1e-2) {
            throw NumericError("gp_posterior: kernel matrix singular even at jitter 1e-2");
        }
    }
}

double set_objective(const Mat& X_base, const Mat& X_A, const Mat& X_c,
                     double gamma, double alpha, double jitter) {
    if (X_c.rows() == 0) throw DataError("set_objective: empty candidate pool");
    const int nb = static_cast<int>(X_base.rows());
    const int na = static_cast<int>(X_A.rows());
    Mat X_train(nb + na, X_c.cols());
    if (nb > 0) X_train.topRows(nb) = X_base;
    if (na > 0) X_train.bottomRows(na) = X_A;

    const GpPosterior post =
        gp_posterior(X_train, Vec::Zero(nb + na), X_c, gamma, jitter);
    const Vec var = post.variance();
    return -(var.sum() + alpha * var.maxCoeff());
}

double gp_impact(const Vec& x, const Mat& X_base, const Mat& X_A,
                 const Mat& X_c, double gamma, double alpha, double jitter) {
    Mat X_A_ext(X_A.rows() + 1, X_c.cols());
    if (X_A.rows() > 0) X_A_ext.topRows(X_A.rows()) = X_A;
    X_A_ext.bottomRows(1) = x.transpose();
    return set_objective(X_base, X_A_ext, X_c, gamma, alpha, jitter) -
           set_objective(X_base, X_A, X_c, gamma, alpha, jitter);
}

double GpModel::score(const Vec& x) const {
    if (X_train.rows() == 0) return 0.0;
    const Mat k12 = kernel_matrix(X_train, x.transpose(), gamma);
    return k12.col(0).dot(coef);
}

double GpModel::predict_proba(const Vec& x) const {
    const double z = score(x);
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double GpModel::variance(const Vec& x) const {
    if (X_train.rows() == 0) return 1.0;
    const Mat k12 = kernel_matrix(X_train, x.transpose(), gamma);
    const Vec v = L.triangularView<Eigen::Lower>().solve(k12.col(0));
    return 1.0 - v.squaredNorm();
}

GpModel fit_gp(const Mat& X_train, const Vec& y_train, double gamma,
               double jitter) {
    GpModel m;
    m.X_train = X_train;
    m.gamma = gamma;
    const int n = static_cast<int>(X_train.rows());
    if (y_train.size() != n) throw DataError("fit_gp: label count mismatch");
    if (n == 0) return m;

    const Mat K11 = kernel_matrix(X_train, X_train, gamma);
    double j = jitter;
    while (true) {
        Mat K = K11;
        K.diagonal().array() += j;
        Eigen::LLT<Mat> llt(K);
        if (llt.info() == Eigen::Success) {
            m.L = llt.matrixL();
            m.coef = llt.solve(y_train);
            m.jitter_used = j;
            return m;
        }
        j *= 10.0;
        if (j > 1e-2) {
            throw NumericError("fit_gp: kernel matrix singular even at jitter 1e-2");
        }
    }
}

}  // namespace gal

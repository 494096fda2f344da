#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hypegbms/geometry.hpp"

namespace hypegbms {

/// Dense row-major square matrix, just enough for N x N kernel work.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    std::size_t size() const { return n_; }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Gaussian kernel weights w_ij = exp(-d_ij^2 / 2 sigma^2) and their
/// row-normalized (stochastic) form.
struct KernelMatrix {
    SquareMatrix raw;
    SquareMatrix normalized;
    double bandwidth = 0.0;
};

/// Pairwise squared hyperbolic distances; symmetric with zero diagonal.
inline SquareMatrix pairwise_sq_dist(const std::vector<BallPoint>& points) {
    if (points.empty()) throw std::invalid_argument("pairwise_sq_dist: empty point list");
    const std::size_t n = points.size();
    SquareMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = dist(points[i], points[j]);
            out(i, j) = out(j, i) = d * d;
        }
    return out;
}

/// Squared Euclidean distances for the GBMS baseline.
inline SquareMatrix pairwise_sq_dist_euclidean(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("pairwise_sq_dist_euclidean: empty matrix");
    const std::size_t n = rows.size();
    SquareMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < rows[i].size(); ++k) {
                const double d = rows[i][k] - rows[j][k];
                s += d * d;
            }
            out(i, j) = out(j, i) = s;
        }
    return out;
}

/// Exponentiates squared distances into kernel weights and row-normalizes.
/// Underflow to 0.0 is fine: the unit diagonal keeps every row sum positive.
inline KernelMatrix gaussian_weights(const SquareMatrix& sq_dists, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_weights: sigma must be positive");
    const std::size_t n = sq_dists.size();
    KernelMatrix km;
    km.bandwidth = sigma;
    km.raw = SquareMatrix(n);
    km.normalized = SquareMatrix(n);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) km.raw(i, j) = std::exp(-sq_dists(i, j) * inv);
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) row_sum += km.raw(i, j);
        for (std::size_t j = 0; j < n; ++j) km.normalized(i, j) = km.raw(i, j) / row_sum;
    }
    return km;
}

/// Hyperbolic kernel density estimate f(x) = (1/N) sum_j exp(-d^2(x, x_j) / 2 sigma^2).
inline double kde(const BallPoint& x, const std::vector<BallPoint>& data, double sigma) {
    if (data.empty()) throw std::invalid_argument("kde: empty data");
    if (!(sigma > 0.0)) throw std::invalid_argument("kde: sigma must be positive");
    double s = 0.0;
    for (const BallPoint& xj : data) {
        const double d = dist(x, xj);
        s += std::exp(-d * d / (2.0 * sigma * sigma));
    }
    return s / double(data.size());
}

/// Riemannian gradient of the KDE:
/// (1 / N sigma^2) sum_j K_sigma(x, x_j) log_x(x_j).
inline TangentVector kde_gradient(const BallPoint& x, const std::vector<BallPoint>& data,
                                  double sigma) {
    if (data.empty()) throw std::invalid_argument("kde_gradient: empty data");
    if (!(sigma > 0.0)) throw std::invalid_argument("kde_gradient: sigma must be positive");
    std::vector<double> grad(x.dim(), 0.0);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (const BallPoint& xj : data) {
        const double d = dist(x, xj);
        const double k = std::exp(-d * d * inv);
        const TangentVector lj = log_map(x, xj);
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += k * lj.vec[i];
    }
    const double scale = 1.0 / (double(data.size()) * sigma * sigma);
    for (double& g : grad) g *= scale;
    return TangentVector(x, std::move(grad));
}

} // namespace hypegbms

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypegbms/errors.hpp"

namespace hypegbms {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

/// Curvature c < 0 of the Poincare ball; kappa() = -c is its magnitude and
/// 1/sqrt(kappa) the ball radius.
class Curvature {
public:
    explicit Curvature(double c) : c_(c) {
        if (!(c < 0.0) || !std::isfinite(c))
            throw std::invalid_argument("curvature must be finite and strictly negative, got " +
                                        std::to_string(c));
    }

    double c() const { return c_; }
    double kappa() const { return -c_; }
    double ball_radius() const { return 1.0 / std::sqrt(-c_); }

    friend bool operator==(const Curvature& a, const Curvature& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Curvature& a, const Curvature& b) { return a.c_ != b.c_; }

private:
    double c_;
};

// Radial safety margin: no point may sit closer to the boundary than this
// fraction of the ball radius. tanh/atanh compositions blow up beyond it.
inline constexpr double kBoundaryMargin = 1e-5;

/// A point of the curvature-c Poincare ball. Membership -c*||x||^2 < 1 is
/// enforced at construction.
class BallPoint {
public:
    BallPoint(std::vector<double> coords, Curvature curvature)
        : coords_(std::move(coords)), curvature_(curvature) {
        if (coords_.empty()) throw std::invalid_argument("BallPoint needs dimension >= 1");
        const double r = norm(coords_);
        if (!(r < curvature_.ball_radius()))
            throw std::invalid_argument("point outside the Poincare ball: ||x|| = " +
                                        std::to_string(r) + ", radius = " +
                                        std::to_string(curvature_.ball_radius()));
    }

    /// Same as the constructor but radially clips coordinates whose norm
    /// reaches (1 - 1e-5) * radius instead of rejecting them.
    static BallPoint clipped(std::vector<double> coords, Curvature curvature) {
        const double r = norm(coords);
        const double max_r = (1.0 - kBoundaryMargin) * curvature.ball_radius();
        if (r >= max_r) {
            const double s = max_r / r;
            for (double& x : coords) x *= s;
        }
        return BallPoint(std::move(coords), curvature);
    }

    static BallPoint origin(std::size_t dim, Curvature curvature) {
        return BallPoint(std::vector<double>(dim, 0.0), curvature);
    }

    const std::vector<double>& coords() const { return coords_; }
    Curvature curvature() const { return curvature_; }
    std::size_t dim() const { return coords_.size(); }
    double radial_norm() const { return norm(coords_); }

    BallPoint negated() const {
        std::vector<double> v = coords_;
        for (double& x : v) x = -x;
        return BallPoint(std::move(v), curvature_);
    }

private:
    std::vector<double> coords_;
    Curvature curvature_;
};

/// A tangent vector attached to a base point.
struct TangentVector {
    TangentVector(BallPoint base, std::vector<double> vec)
        : base(std::move(base)), vec(std::move(vec)) {
        if (this->base.dim() != this->vec.size())
            throw std::invalid_argument("tangent vector dimension mismatch");
    }

    BallPoint base;
    std::vector<double> vec;
};

/// Minkowski coordinates (x0, x1, ..., xp) on the forward hyperboloid sheet.
struct HyperboloidPoint {
    std::vector<double> coords;
};

namespace detail {

inline void require_compatible(const BallPoint& a, const BallPoint& b, const char* op) {
    if (a.curvature() != b.curvature())
        throw std::invalid_argument(std::string(op) + ": curvature mismatch");
    if (a.dim() != b.dim())
        throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}

} // namespace detail

/// Mobius addition v (+) w on the curvature-c ball.
inline BallPoint mobius_add(const BallPoint& v, const BallPoint& w) {
    detail::require_compatible(v, w, "mobius_add");
    const double c = v.curvature().c();
    const double vw = dot(v.coords(), w.coords());
    const double v2 = dot(v.coords(), v.coords());
    const double w2 = dot(w.coords(), w.coords());

    const double denom = 1.0 - 2.0 * c * vw + c * c * v2 * w2;
    if (std::abs(denom) < 1e-15)
        throw numeric_degenerate("mobius_add: denominator vanishes (near-boundary antipodal inputs)");

    const double av = (1.0 - 2.0 * c * vw - c * w2) / denom;
    const double aw = (1.0 + c * v2) / denom;
    std::vector<double> out(v.dim());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = av * v.coords()[i] + aw * w.coords()[i];
    return BallPoint::clipped(std::move(out), v.curvature());
}

/// Mobius scalar multiplication lambda (x) v: scales hyperbolic distance from
/// the origin by |lambda| while keeping the direction of v.
inline BallPoint mobius_scalar_mul(double lambda, const BallPoint& v) {
    if (lambda == 1.0) return v;  // tanh(atanh(x)) = x, exactly
    const double r = v.radial_norm();
    if (r == 0.0) return v;
    const double sk = std::sqrt(v.curvature().kappa());
    const double scaled = std::tanh(lambda * std::atanh(sk * r)) / (sk * r);
    std::vector<double> out(v.dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = scaled * v.coords()[i];
    return BallPoint::clipped(std::move(out), v.curvature());
}

/// Hyperbolic distance d(x, y) = (2/sqrt(kappa)) * atanh(sqrt(kappa) * ||-x (+) y||).
inline double dist(const BallPoint& x, const BallPoint& y) {
    detail::require_compatible(x, y, "dist");
    if (x.coords() == y.coords()) return 0.0;
    const BallPoint diff = mobius_add(x.negated(), y);
    const double sk = std::sqrt(x.curvature().kappa());
    const double a = sk * diff.radial_norm();
    if (a >= 1.0 - 1e-15)
        throw numeric_degenerate("dist: atanh argument at the boundary");
    return (2.0 / sk) * std::atanh(a);
}

/// cosh-form distance on the unit ball (c = -1 only); cross-check for dist().
inline double dist_cosh(const BallPoint& x, const BallPoint& y) {
    detail::require_compatible(x, y, "dist_cosh");
    if (x.curvature().c() != -1.0)
        throw std::invalid_argument("dist_cosh requires curvature c = -1");
    std::vector<double> d(x.dim());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = x.coords()[i] - y.coords()[i];
    const double num = 2.0 * dot(d, d);
    const double den = (1.0 - dot(x.coords(), x.coords())) * (1.0 - dot(y.coords(), y.coords()));
    return std::acosh(1.0 + num / den);
}

/// Isometry from the unit ball onto the forward hyperboloid sheet (c = -1).
inline HyperboloidPoint to_hyperboloid(const BallPoint& x) {
    if (x.curvature().c() != -1.0)
        throw std::invalid_argument("to_hyperboloid requires curvature c = -1");
    const double n2 = dot(x.coords(), x.coords());
    const double s = 1.0 / (1.0 - n2);
    HyperboloidPoint out;
    out.coords.resize(x.dim() + 1);
    out.coords[0] = (1.0 + n2) * s;
    for (std::size_t i = 0; i < x.dim(); ++i) out.coords[i + 1] = 2.0 * x.coords()[i] * s;
    return out;
}

inline double minkowski_inner(const HyperboloidPoint& a, const HyperboloidPoint& b) {
    double s = -a.coords[0] * b.coords[0];
    for (std::size_t i = 1; i < a.coords.size(); ++i) s += a.coords[i] * b.coords[i];
    return s;
}

/// Distance on the hyperboloid model, acosh(-<a,b>_M).
inline double dist_hyperboloid(const HyperboloidPoint& a, const HyperboloidPoint& b) {
    const double m = -minkowski_inner(a, b);
    return std::acosh(m < 1.0 ? 1.0 : m);
}

/// Conformal factor lambda_x = 2 / (1 - kappa * ||x||^2).
inline double conformal_factor(const BallPoint& x) {
    return 2.0 / (1.0 - x.curvature().kappa() * dot(x.coords(), x.coords()));
}

/// Exponential map: follows the geodesic from the base point with initial
/// velocity v for unit time.
inline BallPoint exp_map(const BallPoint& base, const TangentVector& v) {
    const double vn = norm(v.vec);
    if (vn == 0.0) return base;
    const double sk = std::sqrt(base.curvature().kappa());
    const double lam = conformal_factor(base);
    const double t = std::tanh(lam * sk * vn / 2.0) / (sk * vn);
    std::vector<double> step(v.vec.size());
    for (std::size_t i = 0; i < step.size(); ++i) step[i] = t * v.vec[i];
    return mobius_add(base, BallPoint::clipped(std::move(step), base.curvature()));
}

/// Logarithmic map, the inverse of exp_map; returns the exact zero vector at
/// coincident points (removable 0/0 singularity).
inline TangentVector log_map(const BallPoint& base, const BallPoint& y) {
    detail::require_compatible(base, y, "log_map");
    if (base.coords() == y.coords())
        return TangentVector(base, std::vector<double>(base.dim(), 0.0));
    const BallPoint diff = mobius_add(base.negated(), y);
    const double dn = diff.radial_norm();
    if (dn == 0.0) return TangentVector(base, std::vector<double>(base.dim(), 0.0));
    const double sk = std::sqrt(base.curvature().kappa());
    const double lam = conformal_factor(base);
    const double t = (2.0 / lam) * std::atanh(sk * dn) / (sk * dn);
    std::vector<double> out(base.dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = t * diff.coords()[i];
    return TangentVector(base, std::move(out));
}

namespace detail {

inline void require_weights(const std::vector<BallPoint>& points,
                            const std::vector<double>& weights) {
    if (points.empty()) throw std::invalid_argument("weighted mean of an empty point list");
    if (points.size() != weights.size())
        throw std::invalid_argument("points/weights length mismatch");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("weights must sum to 1, got " + std::to_string(sum));
    for (std::size_t j = 1; j < points.size(); ++j)
        require_compatible(points[0], points[j], "weighted mean");
}

} // namespace detail

/// Mobius weighted mean: the (+)-fold of weight-scaled points. Mobius addition
/// is neither associative nor commutative, so the fold is a strict left-fold
/// in ascending index order.
inline BallPoint mobius_weighted_mean(const std::vector<BallPoint>& points,
                                      const std::vector<double>& weights) {
    detail::require_weights(points, weights);
    BallPoint acc = mobius_scalar_mul(weights[0], points[0]);
    for (std::size_t j = 1; j < points.size(); ++j)
        acc = mobius_add(acc, mobius_scalar_mul(weights[j], points[j]));
    return acc;
}

/// Tangent-space mean exp_b(sum_j w_j log_b(x_j)): order-free cross-check of
/// mobius_weighted_mean, accurate to O(r^3) on a radius-r cloud.
inline BallPoint tangent_weighted_mean(const BallPoint& basepoint,
                                       const std::vector<BallPoint>& points,
                                       const std::vector<double>& weights) {
    detail::require_weights(points, weights);
    std::vector<double> acc(basepoint.dim(), 0.0);
    for (std::size_t j = 0; j < points.size(); ++j) {
        const TangentVector lj = log_map(basepoint, points[j]);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += weights[j] * lj.vec[i];
    }
    return exp_map(basepoint, TangentVector(basepoint, std::move(acc)));
}

/// Weighted Frechet mean argmin_z sum_j w_j d^2(z, x_j) by fixed-point Karcher
/// iteration z <- exp_z(0.5 * sum_j w_j log_z(x_j)). Terminates when the
/// gradient-ascent residual ||sum_j w_j log_z(x_j)|| drops below tol.
inline BallPoint frechet_mean(const std::vector<BallPoint>& points,
                              const std::vector<double>& weights, double tol = 1e-10,
                              int max_iter = 1000) {
    detail::require_weights(points, weights);
    BallPoint z = tangent_weighted_mean(points[0], points, weights);
    double residual = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        std::vector<double> grad(z.dim(), 0.0);
        for (std::size_t j = 0; j < points.size(); ++j) {
            const TangentVector lj = log_map(z, points[j]);
            for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += weights[j] * lj.vec[i];
        }
        residual = norm(grad);
        if (residual <= tol) return z;
        for (double& g : grad) g *= 0.5;
        z = exp_map(z, TangentVector(z, std::move(grad)));
    }
    throw convergence_failure("frechet_mean: no convergence within max_iter", z.coords(),
                              residual);
}

/// Standardizes each column (zero mean, unit variance; constant columns stay
/// zero), rescales rows so the largest norm equals `scale`, then maps through
/// exp at the origin. Input is row-major N x p.
inline std::vector<BallPoint> project_to_ball(const std::vector<std::vector<double>>& raw,
                                              Curvature curvature, double scale = 1.0) {
    if (raw.empty() || raw[0].empty()) throw std::invalid_argument("project_to_ball: empty matrix");
    if (!(scale > 0.0)) throw std::invalid_argument("project_to_ball: scale must be positive");
    const std::size_t n = raw.size(), p = raw[0].size();
    for (std::size_t i = 0; i < n; ++i) {
        if (raw[i].size() != p) throw invalid_data("project_to_ball: ragged row", long(i));
        for (double x : raw[i])
            if (!std::isfinite(x)) throw invalid_data("project_to_ball: non-finite entry", long(i));
    }

    std::vector<double> mean(p, 0.0), sd(p, 0.0);
    for (const auto& row : raw)
        for (std::size_t j = 0; j < p; ++j) mean[j] += row[j];
    for (double& m : mean) m /= double(n);
    for (const auto& row : raw)
        for (std::size_t j = 0; j < p; ++j) {
            const double d = row[j] - mean[j];
            sd[j] += d * d;
        }
    for (double& s : sd) s = std::sqrt(s / double(n));

    std::vector<std::vector<double>> std_rows(n, std::vector<double>(p));
    double max_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j)
            std_rows[i][j] = sd[j] > 0.0 ? (raw[i][j] - mean[j]) / sd[j] : 0.0;
        max_norm = std::max(max_norm, norm(std_rows[i]));
    }
    const double rescale = max_norm > 0.0 ? scale / max_norm : 0.0;

    const BallPoint origin = BallPoint::origin(p, curvature);
    std::vector<BallPoint> out;
    out.reserve(n);
    for (auto& row : std_rows) {
        for (double& x : row) x *= rescale;
        out.push_back(exp_map(origin, TangentVector(origin, std::move(row))));
    }
    return out;
}

} // namespace hypegbms

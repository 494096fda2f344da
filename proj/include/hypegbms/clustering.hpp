#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypegbms/geometry.hpp"
#include "hypegbms/kernel.hpp"

namespace hypegbms {

/// All hyperparameters of a clustering run in one validated record.
struct RunConfig {
    double sigma = 0.5;
    Curvature curvature{-1.0};
    double epsilon = 1e-5;                 // movement tolerance
    std::optional<double> delta;           // min cluster separation; empty = median heuristic
    double gamma = 1e-4;                   // entropy-change tolerance
    int max_iter = 200;
    double scale = 1.0;                    // projection scale
    double entropy_bins_fraction = 0.9;    // S = floor(fraction * N) histogram bins
    unsigned long seed = 42;

    void validate() const {
        if (!(sigma > 0.0)) throw std::invalid_argument("RunConfig: sigma must be positive");
        if (!(epsilon > 0.0)) throw std::invalid_argument("RunConfig: epsilon must be positive");
        if (delta && !(*delta > 0.0))
            throw std::invalid_argument("RunConfig: delta must be positive");
        if (!(gamma > 0.0)) throw std::invalid_argument("RunConfig: gamma must be positive");
        if (max_iter < 1) throw std::invalid_argument("RunConfig: max_iter must be >= 1");
        if (!(scale > 0.0)) throw std::invalid_argument("RunConfig: scale must be positive");
        if (!(entropy_bins_fraction > 0.0) || entropy_bins_fraction > 1.0)
            throw std::invalid_argument("RunConfig: entropy_bins_fraction must be in (0, 1]");
    }
};

struct IterationTrace {
    int iteration = 0;
    double avg_movement = 0.0;
    double entropy = 0.0;
    double mean_density = 0.0;
};

enum class StopReason { movement, entropy, max_iter };

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::movement: return "movement";
        case StopReason::entropy: return "entropy";
        case StopReason::max_iter: return "max_iter";
    }
    return "?";
}

struct ClusterResult {
    std::vector<int> labels;
    std::vector<BallPoint> modes;                      // hyperbolic runs
    std::vector<std::vector<double>> euclidean_modes;  // gbms runs
    int num_clusters = 0;
    std::vector<IterationTrace> trace;
    bool converged = false;
    StopReason stop_reason = StopReason::max_iter;
    double delta_used = 0.0;              // resolved separation threshold
};

/// One blurring update: every point is replaced by the Mobius weighted mean of
/// all points under row-normalized Gaussian weights. Returns the new positions
/// and the average movement (1/N) sum_i ||log_{x_i}(x_i')||.
inline std::pair<std::vector<BallPoint>, double> hypegbms_step(
    const std::vector<BallPoint>& points, double sigma) {
    const std::size_t n = points.size();
    const KernelMatrix km = gaussian_weights(pairwise_sq_dist(points), sigma);

    std::vector<BallPoint> next;
    next.reserve(n);
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) weights[j] = km.normalized(i, j);
        try {
            next.push_back(mobius_weighted_mean(points, weights));
        } catch (const numeric_degenerate& e) {
            throw numeric_degenerate(std::string(e.what()) + " (updating point " +
                                     std::to_string(i) + ")");
        }
    }

    double movement = 0.0;
    for (std::size_t i = 0; i < n; ++i) movement += norm(log_map(points[i], next[i]).vec);
    return {std::move(next), movement / double(n)};
}

/// Per-point movements of one step, for the entropy histogram.
inline std::vector<double> pointwise_movements(const std::vector<BallPoint>& before,
                                               const std::vector<BallPoint>& after) {
    std::vector<double> out(before.size());
    for (std::size_t i = 0; i < before.size(); ++i)
        out[i] = norm(log_map(before[i], after[i]).vec);
    return out;
}

/// Euclidean GBMS update x_i' = sum_j wbar_ij x_j.
inline std::pair<std::vector<std::vector<double>>, double> gbms_step(
    const std::vector<std::vector<double>>& rows, double sigma) {
    const std::size_t n = rows.size();
    if (n == 0) throw std::invalid_argument("gbms_step: empty matrix");
    const std::size_t p = rows[0].size();
    const KernelMatrix km = gaussian_weights(pairwise_sq_dist_euclidean(rows), sigma);

    std::vector<std::vector<double>> next(n, std::vector<double>(p, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double w = km.normalized(i, j);
            for (std::size_t k = 0; k < p; ++k) next[i][k] += w * rows[j][k];
        }

    double movement = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < p; ++k) {
            const double d = next[i][k] - rows[i][k];
            s += d * d;
        }
        movement += std::sqrt(s);
    }
    return {std::move(next), movement / double(n)};
}

/// Shannon entropy of the movement histogram with S = floor(bins_fraction * N)
/// equal-width bins over [0, max movement]. All-equal movements give H = 0.
inline double movement_entropy(const std::vector<double>& movements, double bins_fraction) {
    const std::size_t n = movements.size();
    if (n < 2) throw std::invalid_argument("movement_entropy: need at least 2 movements");
    const std::size_t bins =
        std::max<std::size_t>(1, std::size_t(std::floor(bins_fraction * double(n))));
    const double max_m = *std::max_element(movements.begin(), movements.end());
    std::vector<std::size_t> counts(bins, 0);
    for (double m : movements) {
        std::size_t k = max_m > 0.0 ? std::size_t(m / max_m * double(bins)) : 0;
        if (k >= bins) k = bins - 1;
        ++counts[k];
    }
    double h = 0.0;
    for (std::size_t c : counts)
        if (c > 0) {
            const double p = double(c) / double(n);
            h -= p * std::log(p);
        }
    return h;
}

/// Combined stopping rule: movement below epsilon OR entropy stagnation below
/// gamma. The entropy branch only fires when entropy_prev is available
/// (iteration >= 2); movement takes precedence when both fire.
inline std::pair<bool, StopReason> should_stop(double delta_t, std::optional<double> entropy_prev,
                                               double entropy_curr, const RunConfig& cfg) {
    if (delta_t < cfg.epsilon) return {true, StopReason::movement};
    if (entropy_prev && std::abs(entropy_curr - *entropy_prev) < cfg.gamma)
        return {true, StopReason::entropy};
    return {false, StopReason::max_iter};
}

namespace detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t(0));
    }
    std::size_t find(std::size_t i) {
        while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
        return i;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

/// Components of the threshold graph d(i, j) <= delta, labeled in order of
/// first-seen point index.
template <typename DistFn>
std::pair<std::vector<int>, int> threshold_components(std::size_t n, double delta, DistFn&& d) {
    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (d(i, j) <= delta) uf.unite(i, j);
    std::vector<int> labels(n, -1);
    std::vector<int> root_label(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = uf.find(i);
        if (root_label[r] < 0) root_label[r] = next++;
        labels[i] = root_label[r];
    }
    return {std::move(labels), next};
}

} // namespace detail

/// Connected-component cluster assignment at separation delta. Modes are the
/// uniform-weight Frechet means of each component.
inline ClusterResult assign_clusters(const std::vector<BallPoint>& points, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("assign_clusters: delta must be positive");
    ClusterResult out;
    auto [labels, k] = detail::threshold_components(
        points.size(), delta, [&](std::size_t i, std::size_t j) { return dist(points[i], points[j]); });
    out.labels = std::move(labels);
    out.num_clusters = k;
    out.delta_used = delta;
    for (int cl = 0; cl < k; ++cl) {
        std::vector<BallPoint> members;
        for (std::size_t i = 0; i < points.size(); ++i)
            if (out.labels[i] == cl) members.push_back(points[i]);
        std::vector<double> w(members.size(), 1.0 / double(members.size()));
        out.modes.push_back(frechet_mean(members, w));
    }
    return out;
}

namespace detail {

inline double median_positive_distance(std::vector<double> d) {
    std::erase_if(d, [](double x) { return !(x > 0.0); });
    if (d.empty()) return 0.0;
    std::nth_element(d.begin(), d.begin() + long(d.size() / 2), d.end());
    return d[d.size() / 2];
}

template <typename DistFn>
double resolve_delta(const RunConfig& cfg, std::size_t n, DistFn&& d) {
    if (cfg.delta) return *cfg.delta;
    std::vector<double> dists;
    dists.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) dists.push_back(d(i, j));
    const double med = median_positive_distance(std::move(dists));
    return med > 0.0 ? 0.1 * med : cfg.epsilon;  // degenerate all-coincident input
}

inline std::vector<std::vector<double>> standardize_and_scale(
    const std::vector<std::vector<double>>& raw, double scale) {
    // Same preprocessing as project_to_ball minus the exp map.
    if (raw.empty() || raw[0].empty()) throw std::invalid_argument("empty matrix");
    const std::size_t n = raw.size(), p = raw[0].size();
    for (std::size_t i = 0; i < n; ++i) {
        if (raw[i].size() != p) throw invalid_data("ragged row", long(i));
        for (double x : raw[i])
            if (!std::isfinite(x)) throw invalid_data("non-finite entry", long(i));
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
    std::vector<std::vector<double>> out(n, std::vector<double>(p));
    double max_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j)
            out[i][j] = sd[j] > 0.0 ? (raw[i][j] - mean[j]) / sd[j] : 0.0;
        max_norm = std::max(max_norm, norm(out[i]));
    }
    if (max_norm > 0.0)
        for (auto& row : out)
            for (double& x : row) x *= scale / max_norm;
    return out;
}

} // namespace detail

/// Full HypeGBMS pipeline: project onto the ball, blur until the stopping rule
/// fires, then cut the threshold graph into clusters.
inline ClusterResult run_hypegbms(const std::vector<std::vector<double>>& raw,
                                  const RunConfig& cfg) {
    cfg.validate();
    std::vector<BallPoint> points = project_to_ball(raw, cfg.curvature, cfg.scale);
    const std::size_t n = points.size();

    const double delta = detail::resolve_delta(
        cfg, n, [&](std::size_t i, std::size_t j) { return dist(points[i], points[j]); });

    std::vector<IterationTrace> trace;
    bool converged = false;
    StopReason reason = StopReason::max_iter;
    std::optional<double> entropy_prev;

    for (int t = 1; t <= cfg.max_iter; ++t) {
        auto [next, avg_movement] = hypegbms_step(points, cfg.sigma);
        const std::vector<double> movements = pointwise_movements(points, next);
        const double entropy =
            n >= 2 ? movement_entropy(movements, cfg.entropy_bins_fraction) : 0.0;
        points = std::move(next);

        double mean_density = 0.0;
        for (const BallPoint& x : points) mean_density += kde(x, points, cfg.sigma);
        mean_density /= double(n);
        trace.push_back({t, avg_movement, entropy, mean_density});

        auto [stop, why] = should_stop(avg_movement, entropy_prev, entropy, cfg);
        entropy_prev = entropy;
        if (stop) {
            converged = true;
            reason = why;
            break;
        }
    }

    ClusterResult out = assign_clusters(points, delta);
    out.trace = std::move(trace);
    out.converged = converged;
    out.stop_reason = reason;
    return out;
}

/// Euclidean GBMS baseline with the same preprocessing (standardize + scale)
/// and the same stopping rule, but Euclidean distance, mean, and adjacency.
inline ClusterResult run_gbms(const std::vector<std::vector<double>>& raw, const RunConfig& cfg) {
    cfg.validate();
    std::vector<std::vector<double>> rows = detail::standardize_and_scale(raw, cfg.scale);
    const std::size_t n = rows.size();

    auto eudist = [&](std::size_t i, std::size_t j) {
        double s = 0.0;
        for (std::size_t k = 0; k < rows[i].size(); ++k) {
            const double d = rows[i][k] - rows[j][k];
            s += d * d;
        }
        return std::sqrt(s);
    };
    const double delta = detail::resolve_delta(cfg, n, eudist);

    std::vector<IterationTrace> trace;
    bool converged = false;
    StopReason reason = StopReason::max_iter;
    std::optional<double> entropy_prev;

    for (int t = 1; t <= cfg.max_iter; ++t) {
        auto [next, avg_movement] = gbms_step(rows, cfg.sigma);
        std::vector<double> movements(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < rows[i].size(); ++k) {
                const double d = next[i][k] - rows[i][k];
                s += d * d;
            }
            movements[i] = std::sqrt(s);
        }
        const double entropy =
            n >= 2 ? movement_entropy(movements, cfg.entropy_bins_fraction) : 0.0;
        rows = std::move(next);

        // Euclidean Gaussian KDE over the blurred data, same role as the
        // hyperbolic mean_density.
        double mean_density = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double d = eudist(i, j);
                s += std::exp(-d * d / (2.0 * cfg.sigma * cfg.sigma));
            }
            mean_density += s / double(n);
        }
        mean_density /= double(n);
        trace.push_back({t, avg_movement, entropy, mean_density});

        auto [stop, why] = should_stop(avg_movement, entropy_prev, entropy, cfg);
        entropy_prev = entropy;
        if (stop) {
            converged = true;
            reason = why;
            break;
        }
    }

    ClusterResult out;
    auto [labels, k] = detail::threshold_components(n, delta, eudist);
    out.labels = std::move(labels);
    out.num_clusters = k;
    out.delta_used = delta;
    for (int cl = 0; cl < k; ++cl) {
        std::vector<double> centroid(rows[0].size(), 0.0);
        int count = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (out.labels[i] == cl) {
                for (std::size_t j = 0; j < centroid.size(); ++j) centroid[j] += rows[i][j];
                ++count;
            }
        for (double& x : centroid) x /= double(count);
        out.euclidean_modes.push_back(std::move(centroid));
    }
    out.trace = std::move(trace);
    out.converged = converged;
    out.stop_reason = reason;
    return out;
}

} // namespace hypegbms

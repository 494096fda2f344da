#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hypegbms/clustering.hpp"
#include "hypegbms/data.hpp"
#include "hypegbms/geometry.hpp"
#include "hypegbms/kernel.hpp"
#include "hypegbms/metrics.hpp"

namespace hypegbms::validate {

/// One self-check outcome. `measured` is compared against `threshold` in the
/// direction given by `op` ("<=" or ">=").
struct Check {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    std::string op = "<=";
    bool ok = false;
    std::string detail;
};

namespace detail {

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t p, double max_norm) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> v(p);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (double& x : v) {
            x = gauss(rng);
            n2 += x * x;
        }
    } while (n2 == 0.0);
    const double r = max_norm * std::pow(unif(rng), 1.0 / double(p));
    const double s = r / std::sqrt(n2);
    for (double& x : v) x *= s;
    return v;
}

inline BallPoint random_ball_point(std::mt19937_64& rng, std::size_t p, double max_norm,
                                   Curvature c) {
    return BallPoint(random_vector(rng, p, max_norm * c.ball_radius()), c);
}

inline double slope_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    // Least-squares slope of log(y) against log(x).
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(xs[i]);
        my += std::log(ys[i]);
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(xs[i]) - mx;
        sxy += dx * (std::log(ys[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

// All partitions of {0..n-1} as restricted-growth label strings.
inline std::vector<std::vector<int>> all_partitions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> labels(std::size_t(n), 0);
    std::function<void(int, int)> rec = [&](int i, int max_used) {
        if (i == n) {
            out.push_back(labels);
            return;
        }
        for (int v = 0; v <= max_used + 1; ++v) {
            labels[std::size_t(i)] = v;
            rec(i + 1, std::max(max_used, v));
        }
    };
    rec(0, -1);
    return out;
}

// Pair-counting ARI oracle: iterates over every point pair directly.
inline double ari_bruteforce(const std::vector<int>& a, const std::vector<int>& b) {
    const std::size_t n = a.size();
    double n11 = 0, n00 = 0, n10 = 0, n01 = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool sa = a[i] == a[j], sb = b[i] == b[j];
            if (sa && sb) ++n11;
            else if (!sa && !sb) ++n00;
            else if (sa) ++n10;
            else ++n01;
        }
    const double total = n11 + n00 + n10 + n01;
    const double expected = (n11 + n10) * (n11 + n01) / total;
    const double max_index = 0.5 * ((n11 + n10) + (n11 + n01));
    if (max_index == expected) {
        const bool a_single = std::all_of(a.begin(), a.end(), [&](int x) { return x == a[0]; });
        const bool b_single = std::all_of(b.begin(), b.end(), [&](int x) { return x == b[0]; });
        return (a_single && b_single) ? 1.0 : 0.0;
    }
    return (n11 - expected) / (max_index - expected);
}

// Plug-in entropy NMI oracle computed from scratch on flat histograms.
inline double nmi_plugin(const std::vector<int>& a, const std::vector<int>& b) {
    const double n = double(a.size());
    std::map<int, double> pa, pb;
    std::map<std::pair<int, int>, double> pab;
    for (std::size_t i = 0; i < a.size(); ++i) {
        pa[a[i]] += 1.0 / n;
        pb[b[i]] += 1.0 / n;
        pab[{a[i], b[i]}] += 1.0 / n;
    }
    double ha = 0.0, hb = 0.0, hab = 0.0;
    for (auto& [_, p] : pa) ha -= p * std::log(p);
    for (auto& [_, p] : pb) hb -= p * std::log(p);
    for (auto& [_, p] : pab) hab -= p * std::log(p);
    const double mi = ha + hb - hab;
    const double denom = 0.5 * (ha + hb);
    if (denom == 0.0) return 1.0;
    return mi / denom;
}

} // namespace detail

/// atanh-form, cosh-form, and hyperboloid distances agree on random pairs.
inline Check check_distance_agreement(unsigned long seed = 42, int samples = 1000) {
    std::mt19937_64 rng(seed);
    const Curvature c(-1.0);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const BallPoint x = detail::random_ball_point(rng, 3, 0.95, c);
        const BallPoint y = detail::random_ball_point(rng, 3, 0.95, c);
        const double d1 = dist(x, y);
        const double d2 = dist_cosh(x, y);
        const double d3 = dist_hyperboloid(to_hyperboloid(x), to_hyperboloid(y));
        worst = std::max({worst, std::abs(d1 - d2), std::abs(d1 - d3), std::abs(d2 - d3)});
    }
    return {"distance-agreement", worst, 1e-9, "<=", worst <= 1e-9,
            "max pairwise discrepancy of the three distance formulations"};
}

/// exp_map(base, log_map(base, y)) recovers y per coordinate.
inline Check check_explog_roundtrip(unsigned long seed = 42, int samples = 1000) {
    std::mt19937_64 rng(seed);
    const Curvature c(-1.0);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const BallPoint base = detail::random_ball_point(rng, 3, 0.9, c);
        const BallPoint y = detail::random_ball_point(rng, 3, 0.9, c);
        const BallPoint back = exp_map(base, log_map(base, y));
        for (std::size_t i = 0; i < y.dim(); ++i)
            worst = std::max(worst, std::abs(back.coords()[i] - y.coords()[i]));
    }
    return {"explog-roundtrip", worst, 1e-10, "<=", worst <= 1e-10,
            "max per-coordinate error of exp(log) round trips"};
}

/// With c = -1e-8, Mobius addition and both weighted means reduce to their
/// Euclidean counterparts.
inline Check check_euclidean_limit(unsigned long seed = 42, int samples = 200) {
    std::mt19937_64 rng(seed);
    const Curvature c(-1e-8);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const BallPoint v(detail::random_vector(rng, 3, 1.0), c);
        const BallPoint w(detail::random_vector(rng, 3, 1.0), c);
        const BallPoint sum = mobius_add(v, w);
        for (std::size_t i = 0; i < 3; ++i)
            worst = std::max(worst,
                             std::abs(sum.coords()[i] - (v.coords()[i] + w.coords()[i])));
    }
    for (int s = 0; s < 20; ++s) {
        std::vector<BallPoint> pts;
        std::vector<double> ws;
        for (int j = 0; j < 5; ++j) {
            pts.emplace_back(detail::random_vector(rng, 3, 1.0), c);
            ws.push_back(unif(rng) + 0.1);
        }
        double total = 0.0;
        for (double w : ws) total += w;
        for (double& w : ws) w /= total;
        std::vector<double> euclid(3, 0.0);
        for (int j = 0; j < 5; ++j)
            for (std::size_t i = 0; i < 3; ++i) euclid[i] += ws[std::size_t(j)] * pts[std::size_t(j)].coords()[i];
        const BallPoint mm = mobius_weighted_mean(pts, ws);
        const BallPoint tm = tangent_weighted_mean(pts[0], pts, ws);
        for (std::size_t i = 0; i < 3; ++i) {
            worst = std::max(worst, std::abs(mm.coords()[i] - euclid[i]));
            worst = std::max(worst, std::abs(tm.coords()[i] - euclid[i]));
        }
    }
    return {"euclidean-limit", worst, 1e-5, "<=", worst <= 1e-5,
            "max deviation of c=-1e-8 Mobius ops from Euclidean ops"};
}

/// Mobius-vs-Frechet mean error scales cubically with cloud radius.
inline Check check_prop1_slope(unsigned long seed = 42, int trials_per_radius = 50) {
    std::mt19937_64 rng(seed);
    const Curvature c(-1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::vector<double> radii{0.05, 0.1, 0.2, 0.4};
    std::vector<double> mean_errors;
    for (double r : radii) {
        double acc = 0.0;
        for (int t = 0; t < trials_per_radius; ++t) {
            std::vector<BallPoint> pts;
            std::vector<double> ws;
            for (int j = 0; j < 10; ++j) {
                // Point with hyperbolic norm <= r, i.e. Euclidean norm <= tanh(r/2).
                pts.push_back(detail::random_ball_point(rng, 3, std::tanh(r / 2.0), c));
                ws.push_back(unif(rng) + 0.1);
            }
            double total = 0.0;
            for (double w : ws) total += w;
            for (double& w : ws) w /= total;
            acc += dist(mobius_weighted_mean(pts, ws), frechet_mean(pts, ws));
        }
        mean_errors.push_back(acc / double(trials_per_radius));
    }
    const double slope = detail::slope_loglog(radii, mean_errors);
    return {"prop1-cubic-slope", slope, 2.5, ">=", slope >= 2.5,
            "log-log slope of Mobius-vs-Frechet mean error against cloud radius"};
}

/// Mean KDE over the blurred dataset never decreases (up to slack) on a
/// hierarchical fixture confined near the origin.
inline Check check_density_ascent(unsigned long seed = 42) {
    Dataset ds = make_hierarchical(1, 3, 100, 0.05, 2.0, 3, seed);
    RunConfig cfg;
    cfg.sigma = 0.5;
    cfg.curvature = Curvature(-1.0);
    cfg.scale = 0.2;  // hyperbolic radius <= 0.4 after projection
    cfg.seed = seed;
    const ClusterResult res = run_hypegbms(ds.features, cfg);
    double worst_drop = 0.0;
    for (std::size_t t = 1; t < res.trace.size(); ++t)
        worst_drop =
            std::max(worst_drop, res.trace[t - 1].mean_density - res.trace[t].mean_density);
    return {"density-ascent", worst_drop, 1e-3, "<=", worst_drop <= 1e-3,
            "largest per-iteration drop of mean KDE on the hierarchical fixture"};
}

/// Analytical KDE gradient against central finite differences of the KDE
/// along random geodesic directions (metric inner product).
inline Check check_kde_gradient(unsigned long seed = 42, int configs = 20) {
    std::mt19937_64 rng(seed);
    const Curvature c(-1.0);
    std::uniform_real_distribution<double> sigma_dist(0.3, 1.5);
    double worst = 0.0;
    for (int s = 0; s < configs; ++s) {
        const BallPoint x = detail::random_ball_point(rng, 3, 0.5, c);
        std::vector<BallPoint> data;
        for (int j = 0; j < 10; ++j) data.push_back(detail::random_ball_point(rng, 3, 0.8, c));
        const double sigma = sigma_dist(rng);
        std::vector<double> u = detail::random_vector(rng, 3, 1.0);
        const double un = norm(u);
        for (double& ui : u) ui /= un;

        const double h = 1e-5;
        auto shift = [&](double t) {
            std::vector<double> tu(u);
            for (double& ui : tu) ui *= t;
            return kde(exp_map(x, TangentVector(x, std::move(tu))), data, sigma);
        };
        const double fd = (shift(h) - shift(-h)) / (2.0 * h);

        const TangentVector grad = kde_gradient(x, data, sigma);
        const double lam = conformal_factor(x);
        const double analytic = lam * lam * dot(grad.vec, u);
        worst = std::max(worst, std::abs(fd - analytic) / std::max(std::abs(fd), 1e-12));
    }
    return {"kde-gradient", worst, 1e-5, "<=", worst <= 1e-5,
            "worst relative error of analytical vs finite-difference KDE derivative"};
}

/// ARI and NMI against independent brute-force oracles over every pair of
/// partitions of sets up to size 6.
inline Check check_metric_oracles(int max_n = 6) {
    double worst = 0.0;
    for (int n = 2; n <= max_n; ++n) {
        const auto parts = detail::all_partitions(n);
        for (const auto& a : parts)
            for (const auto& b : parts) {
                worst = std::max(worst, std::abs(ari(a, b) - detail::ari_bruteforce(a, b)));
                worst = std::max(worst, std::abs(nmi(a, b) - detail::nmi_plugin(a, b)));
            }
    }
    const std::vector<int> a{0, 0, 1, 1}, b{0, 1, 0, 1};
    worst = std::max(worst, std::abs(ari(a, b) - (-0.5)));
    return {"metric-oracles", worst, 1e-12, "<=", worst <= 1e-12,
            "worst ARI/NMI deviation from brute-force oracles, exhaustive n <= 6"};
}

/// The full default check battery, in reporting order. A non-empty `only`
/// restricts the run to the named check without computing the rest.
inline std::vector<Check> run_all(unsigned long seed = 42, bool inject_fault = false,
                                  const std::string& only = "") {
    const std::vector<std::pair<std::string, std::function<Check()>>> battery{
        {"distance-agreement", [&] { return check_distance_agreement(seed); }},
        {"explog-roundtrip", [&] { return check_explog_roundtrip(seed); }},
        {"euclidean-limit", [&] { return check_euclidean_limit(seed); }},
        {"prop1-cubic-slope", [&] { return check_prop1_slope(seed); }},
        {"density-ascent", [&] { return check_density_ascent(seed); }},
        {"kde-gradient", [&] { return check_kde_gradient(seed); }},
        {"metric-oracles", [&] { return check_metric_oracles(); }},
    };
    std::vector<Check> checks;
    for (const auto& [name, fn] : battery)
        if (only.empty() || name == only) checks.push_back(fn());
    if (inject_fault && !checks.empty()) {
        checks.front().measured += 1.0;
        checks.front().ok = false;
        checks.front().detail += " [injected fault]";
    }
    return checks;
}

} // namespace hypegbms::validate

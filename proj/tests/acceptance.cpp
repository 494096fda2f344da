// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Criteria 1-7 reuse the library's self-validation battery;
// 3b and 8-10 are driven directly here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "hypegbms/clustering.hpp"
#include "hypegbms/data.hpp"
#include "hypegbms/geometry.hpp"
#include "hypegbms/report.hpp"
#include "hypegbms/validate.hpp"

using namespace hypegbms;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok, double measured, const char* op,
            double threshold, double seconds) {
    std::printf("[%s] %2d. %-28s measured %12.6g %s %-10g (%.2fs)\n", ok ? "PASS" : "FAIL", idx,
                name.c_str(), measured, op, threshold, seconds);
    if (!ok) ++failures;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double secs() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::vector<std::vector<double>> random_matrix(std::mt19937_64& rng, std::size_t n,
                                               std::size_t p) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<double>> m(n, std::vector<double>(p));
    for (auto& row : m)
        for (double& x : row) x = gauss(rng);
    return m;
}

// Criterion 3b: full HypeGBMS at c = -1e-8 tracks GBMS per coordinate at
// every iteration.
void criterion_euclidean_limit_pipeline() {
    Timer t;
    std::mt19937_64 rng(42);
    const auto raw = random_matrix(rng, 50, 3);
    const double sigma = 0.5;

    std::vector<BallPoint> pts = project_to_ball(raw, Curvature(-1e-8), 1.0);
    std::vector<std::vector<double>> rows = detail::standardize_and_scale(raw, 1.0);

    double worst = 0.0;
    for (int it = 0; it < 40; ++it) {
        // ball distance tends to 2 * ||x - y|| as c -> 0, so the Euclidean run
        // matches at half the bandwidth
        auto [next_h, dh] = hypegbms_step(pts, sigma);
        auto [next_e, de] = gbms_step(rows, sigma / 2.0);
        pts = std::move(next_h);
        rows = std::move(next_e);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t k = 0; k < rows[i].size(); ++k)
                worst = std::max(worst, std::abs(pts[i].coords()[k] - rows[i][k]));
        if (de < 1e-8) break;
    }
    report(3, "euclidean-limit-pipeline", worst <= 1e-4, worst, "<=", 1e-4, t.secs());
}

// Criterion 8: swept sigma recovers the 2x2x75 hierarchical fixture.
void criterion_end_to_end() {
    Timer t;
    const Dataset ds = make_hierarchical(2, 2, 75, 0.05, 12.0, 3, 42);
    double best_ari = -1.0;
    bool best_before_cap = false;
    for (double sigma : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0}) {
        RunConfig cfg;
        cfg.sigma = sigma;
        cfg.curvature = Curvature(-1.0);
        const ClusterResult r = run_hypegbms(ds.features, cfg);
        const double a = ari(r.labels, *ds.labels);
        if (a > best_ari) {
            best_ari = a;
            best_before_cap = r.converged && int(r.trace.size()) < cfg.max_iter;
        }
    }
    report(8, "end-to-end-clustering", best_ari >= 0.9 && best_before_cap, best_ari, ">=", 0.9,
           t.secs());
}

// Criterion 9: one-iteration cost ratio N=1000 vs N=500 is near-quadratic.
void criterion_complexity() {
    Timer t;
    std::mt19937_64 rng(42);
    const Curvature c(-1.0);
    std::normal_distribution<double> gauss(0.0, 0.25);
    std::vector<BallPoint> pts;
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> v{gauss(rng), gauss(rng), gauss(rng)};
        pts.push_back(BallPoint::clipped(std::move(v), c));
    }
    const std::vector<BallPoint> half(pts.begin(), pts.begin() + 500);

    auto time_step = [&](const std::vector<BallPoint>& data) {
        double best = 1e300;
        for (int rep = 0; rep < 3; ++rep) {
            Timer step;
            hypegbms_step(data, 0.5);
            best = std::min(best, step.secs());
        }
        return best;
    };
    const double t_half = time_step(half);
    const double t_full = time_step(pts);
    const double ratio = t_full / t_half;
    report(9, "complexity-scaling", ratio >= 3.0 && ratio <= 6.0, ratio, "in", 4.0, t.secs());
}

// Criterion 10: stopping rules fire as specified and the report carries the
// movement and entropy sequences.
void criterion_stopping() {
    Timer t;
    bool ok = true;

    RunConfig cfg;
    const ClusterResult identical = run_hypegbms({{2.0}, {2.0}, {2.0}, {2.0}}, cfg);
    ok = ok && identical.trace.size() == 1 && identical.stop_reason == StopReason::movement &&
         identical.converged;

    auto [stop_e, reason_e] = should_stop(1.0, 0.5, 0.5, cfg);
    ok = ok && stop_e && reason_e == StopReason::entropy;
    auto [stop_n, reason_n] = should_stop(1.0, 0.0, 1.0, cfg);
    ok = ok && !stop_n;

    const Dataset ds = make_hierarchical(2, 1, 20, 0.05, 10.0, 2, 42);
    RunConfig cfg2;
    cfg2.sigma = 0.3;
    const ClusterResult r = run_hypegbms(ds.features, cfg2);
    const nlohmann::json j = make_report("hypegbms", r, cfg2, 0.0, ds.labels);
    ok = ok && j.contains("avg_movement") && j.contains("entropy") &&
         j["avg_movement"].size() == r.trace.size() && j["entropy"].size() == r.trace.size();

    report(10, "stopping-criteria", ok, ok ? 1.0 : 0.0, ">=", 1.0, t.secs());
}

} // namespace

int main() {
    {
        Timer t;
        const auto c = validate::check_distance_agreement(42);
        report(1, c.name, c.ok, c.measured, c.op.c_str(), c.threshold, t.secs());
    }
    {
        Timer t;
        const auto c = validate::check_explog_roundtrip(42);
        report(2, c.name, c.ok, c.measured, c.op.c_str(), c.threshold, t.secs());
    }
    {
        Timer t;
        const auto c = validate::check_euclidean_limit(42);
        report(3, c.name, c.ok, c.measured, c.op.c_str(), c.threshold, t.secs());
    }
    criterion_euclidean_limit_pipeline();
    {
        Timer t;
        const auto c = validate::check_prop1_slope(42);
        report(4, c.name, c.ok, c.measured, c.op.c_str(), c.threshold, t.secs());
    }
    {
        Timer t;
        const auto c = validate::check_density_ascent(42);
        report(5, c.name, c.ok, c.measured, c.op.c_str(), c.threshold, t.secs());
    }
    {
        Timer t;
        const auto c = validate::check_kde_gradient(42);
        report(6, c.name, c.ok, c.measured, c.op.c_str(), c.threshold, t.secs());
    }
    {
        Timer t;
        const auto c = validate::check_metric_oracles(6);
        report(7, c.name, c.ok, c.measured, c.op.c_str(), c.threshold, t.secs());
    }
    criterion_end_to_end();
    criterion_complexity();
    criterion_stopping();

    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}

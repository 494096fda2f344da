#include <cmath>
#include <random>

#include <doctest.h>

#include "hypegbms/geometry.hpp"

using namespace hypegbms;

namespace {

const Curvature kUnit(-1.0);

BallPoint pt(std::vector<double> v, Curvature c = kUnit) { return BallPoint(std::move(v), c); }

BallPoint random_point(std::mt19937_64& rng, std::size_t p, double max_norm, Curvature c = kUnit) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> v(p);
    double n2 = 0.0;
    for (double& x : v) {
        x = gauss(rng);
        n2 += x * x;
    }
    const double r = max_norm * c.ball_radius() * unif(rng);
    const double s = r / std::sqrt(n2);
    for (double& x : v) x *= s;
    return BallPoint(std::move(v), c);
}

} // namespace

TEST_CASE("curvature validation") {
    CHECK_THROWS_AS(Curvature(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Curvature(1.0), std::invalid_argument);
    CHECK(Curvature(-4.0).kappa() == 4.0);
    CHECK(Curvature(-4.0).ball_radius() == doctest::Approx(0.5));
}

TEST_CASE("ball membership is strict") {
    CHECK_THROWS_AS(pt({1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(pt({2.0}, Curvature(-0.25)), std::invalid_argument);
    CHECK_NOTHROW(pt({0.999999}));
    // clipped() pulls boundary coordinates inside instead
    const BallPoint clipped = BallPoint::clipped({0.9999999, 0.0}, kUnit);
    CHECK(clipped.radial_norm() == doctest::Approx(1.0 - 1e-5));
}

TEST_CASE("mobius_add identities") {
    const BallPoint v = pt({0.3, -0.2});
    const BallPoint zero = BallPoint::origin(2, kUnit);
    const BallPoint vz = mobius_add(v, zero);
    CHECK(vz.coords()[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(vz.coords()[1] == doctest::Approx(-0.2).epsilon(1e-12));

    const BallPoint cancel = mobius_add(v.negated(), v);
    CHECK(std::abs(cancel.coords()[0]) < 1e-15);
    CHECK(std::abs(cancel.coords()[1]) < 1e-15);
}

TEST_CASE("mobius_add collinear case reduces to relativistic addition") {
    const BallPoint r = mobius_add(pt({0.5, 0.0}), pt({0.3, 0.0}));
    CHECK(r.coords()[0] == doctest::Approx(0.8 / 1.15).epsilon(1e-14));
    CHECK(r.coords()[1] == 0.0);
}

TEST_CASE("mobius_add left cancellation, random") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const BallPoint v = random_point(rng, 3, 0.9);
        const BallPoint w = random_point(rng, 3, 0.9);
        const BallPoint back = mobius_add(v.negated(), mobius_add(v, w));
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(std::abs(back.coords()[k] - w.coords()[k]) < 1e-10);
    }
}

TEST_CASE("mobius_add rejects mismatched arguments") {
    CHECK_THROWS_AS(mobius_add(pt({0.1, 0.0}), pt({0.1})), std::invalid_argument);
    CHECK_THROWS_AS(mobius_add(pt({0.1}), pt({0.1}, Curvature(-2.0))), std::invalid_argument);
}

TEST_CASE("mobius_scalar_mul") {
    const BallPoint v = pt({0.5, 0.0});
    const BallPoint same = mobius_scalar_mul(1.0, v);
    CHECK(same.coords()[0] == doctest::Approx(0.5).epsilon(1e-14));

    const BallPoint zero = mobius_scalar_mul(3.7, BallPoint::origin(2, kUnit));
    CHECK(zero.radial_norm() == 0.0);

    // doubling identity: 2 (x) v = 2v / (1 + ||v||^2)
    const BallPoint twice = mobius_scalar_mul(2.0, v);
    CHECK(twice.coords()[0] == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(twice.coords()[1] == 0.0);
}

TEST_CASE("scalar multiplication scales distance from the origin") {
    std::mt19937_64 rng(11);
    const BallPoint o = BallPoint::origin(3, kUnit);
    for (int i = 0; i < 100; ++i) {
        const BallPoint v = random_point(rng, 3, 0.7);
        const double lam = std::uniform_real_distribution<double>(-1.3, 1.3)(rng);
        CHECK(dist(o, mobius_scalar_mul(lam, v)) ==
              doctest::Approx(std::abs(lam) * dist(o, v)).epsilon(1e-10));
    }
}

TEST_CASE("distance basics") {
    const BallPoint x = pt({0.2, 0.4});
    CHECK(dist(x, x) == 0.0);

    const BallPoint o = BallPoint::origin(2, kUnit);
    const BallPoint y = pt({0.5, 0.0});
    CHECK(dist(o, y) == doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-14));
    CHECK(dist_cosh(o, y) == doctest::Approx(std::acosh(1.0 + 0.5 / 0.75)).epsilon(1e-14));
    CHECK(dist(o, y) == doctest::Approx(dist_cosh(o, y)).epsilon(1e-12));
}

TEST_CASE("distance symmetry and triangle inequality on samples") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        const BallPoint a = random_point(rng, 3, 0.9);
        const BallPoint b = random_point(rng, 3, 0.9);
        const BallPoint c = random_point(rng, 3, 0.9);
        CHECK(std::abs(dist(a, b) - dist(b, a)) < 1e-12);
        CHECK(dist(a, c) <= dist(a, b) + dist(b, c) + 1e-9);
    }
}

TEST_CASE("dist_cosh requires unit curvature") {
    const Curvature c2(-2.0);
    CHECK_THROWS_AS(dist_cosh(pt({0.1}, c2), pt({0.2}, c2)), std::invalid_argument);
}

TEST_CASE("hyperboloid lift") {
    const HyperboloidPoint apex = to_hyperboloid(BallPoint::origin(3, kUnit));
    CHECK(apex.coords[0] == 1.0);
    CHECK(apex.coords[1] == 0.0);

    const HyperboloidPoint h = to_hyperboloid(pt({0.5, 0.0}));
    CHECK(h.coords[0] == doctest::Approx(1.25 / 0.75).epsilon(1e-14));
    CHECK(h.coords[1] == doctest::Approx(1.0 / 0.75).epsilon(1e-14));
    CHECK(h.coords[2] == 0.0);
    CHECK(-h.coords[0] * h.coords[0] + h.coords[1] * h.coords[1] ==
          doctest::Approx(-1.0).epsilon(1e-9));

    CHECK_THROWS_AS(to_hyperboloid(pt({0.1}, Curvature(-2.0))), std::invalid_argument);
}

TEST_CASE("hyperboloid distance matches ball distance") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
        const BallPoint x = random_point(rng, 3, 0.95);
        const BallPoint y = random_point(rng, 3, 0.95);
        CHECK(dist_hyperboloid(to_hyperboloid(x), to_hyperboloid(y)) ==
              doctest::Approx(dist(x, y)).epsilon(1e-9));
    }
}

TEST_CASE("exp_map basics") {
    const BallPoint x = pt({0.2, -0.1});
    CHECK(exp_map(x, TangentVector(x, {0.0, 0.0})).coords() == x.coords());

    const BallPoint o = BallPoint::origin(2, kUnit);
    const BallPoint e = exp_map(o, TangentVector(o, {1.0, 0.0}));
    CHECK(e.coords()[0] == doctest::Approx(std::tanh(1.0)).epsilon(1e-14));
    CHECK(e.coords()[1] == 0.0);
}

TEST_CASE("log_map basics") {
    const BallPoint x = pt({0.2, -0.1});
    CHECK(norm(log_map(x, x).vec) == 0.0);

    const BallPoint o = BallPoint::origin(2, kUnit);
    const TangentVector l = log_map(o, pt({0.5, 0.0}));
    CHECK(l.vec[0] == doctest::Approx(std::atanh(0.5)).epsilon(1e-14));
    CHECK(l.vec[1] == 0.0);
}

TEST_CASE("exp/log Euclidean limit at tiny curvature") {
    const Curvature tiny(-1e-10);
    const BallPoint x = pt({0.2, 0.3}, tiny);
    const BallPoint y = pt({-0.4, 0.1}, tiny);
    const TangentVector l = log_map(x, y);
    CHECK(l.vec[0] == doctest::Approx(-0.6).epsilon(1e-5));
    CHECK(l.vec[1] == doctest::Approx(-0.2).epsilon(1e-5));
    const BallPoint e = exp_map(x, TangentVector(x, {0.5, -0.1}));
    CHECK(e.coords()[0] == doctest::Approx(0.7).epsilon(1e-5));
    CHECK(e.coords()[1] == doctest::Approx(0.2).epsilon(1e-5));
}

TEST_CASE("exp/log round trip, random") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 1000; ++i) {
        const BallPoint base = random_point(rng, 3, 0.9);
        const BallPoint y = random_point(rng, 3, 0.9);
        const BallPoint back = exp_map(base, log_map(base, y));
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(std::abs(back.coords()[k] - y.coords()[k]) < 1e-10);
    }
}

TEST_CASE("mobius_weighted_mean basics") {
    const BallPoint a = pt({0.4, 0.1});
    CHECK(mobius_weighted_mean({a}, {1.0}).coords() == a.coords());

    const BallPoint m = mobius_weighted_mean({pt({0.4, 0.0}), pt({-0.4, 0.0})}, {0.5, 0.5});
    CHECK(std::abs(m.coords()[0]) < 1e-15);

    CHECK_THROWS_AS(mobius_weighted_mean({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(mobius_weighted_mean({a}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(mobius_weighted_mean({a, a}, {1.5, -0.5}), std::invalid_argument);
}

TEST_CASE("mobius mean tracks the Frechet mean on small clouds") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const BallPoint center = random_point(rng, 2, 0.2);
        std::vector<BallPoint> pts;
        std::vector<double> ws;
        double total = 0.0;
        std::uniform_real_distribution<double> tan_coord(-0.02, 0.02);
        for (int j = 0; j < 3; ++j) {
            // small cloud around the center, cubic-error regime
            std::vector<double> v{tan_coord(rng), tan_coord(rng)};
            pts.push_back(exp_map(center, TangentVector(center, std::move(v))));
            ws.push_back(unif(rng));
            total += ws.back();
        }
        for (double& w : ws) w /= total;
        CHECK(dist(mobius_weighted_mean(pts, ws), frechet_mean(pts, ws)) < 1e-3);
    }
}

TEST_CASE("tangent_weighted_mean basics") {
    const BallPoint a = pt({0.3, 0.2});
    CHECK(norm(log_map(a, tangent_weighted_mean(a, {a}, {1.0})).vec) < 1e-15);

    // symmetric pair about the basepoint: logs cancel
    const BallPoint base = BallPoint::origin(2, kUnit);
    const BallPoint m =
        tangent_weighted_mean(base, {pt({0.3, 0.0}), pt({-0.3, 0.0})}, {0.5, 0.5});
    CHECK(m.radial_norm() < 1e-15);
}

TEST_CASE("tangent mean agrees with mobius mean in the cubic-error regime") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const BallPoint base = random_point(rng, 2, 0.2);
        std::vector<BallPoint> pts;
        std::vector<double> ws;
        double total = 0.0;
        for (int j = 0; j < 5; ++j) {
            std::vector<double> v(2);
            std::normal_distribution<double> gauss(0.0, 0.01);
            for (double& x : v) x = gauss(rng);
            pts.push_back(exp_map(base, TangentVector(base, std::move(v))));
            ws.push_back(unif(rng));
            total += ws.back();
        }
        for (double& w : ws) w /= total;
        CHECK(dist(tangent_weighted_mean(base, pts, ws), mobius_weighted_mean(pts, ws)) < 5e-4);
    }
}

TEST_CASE("frechet_mean basics") {
    const BallPoint a = pt({0.3, -0.4});
    const BallPoint single = frechet_mean({a}, {1.0});
    CHECK(dist(single, a) < 1e-9);

    const BallPoint mid = frechet_mean({pt({0.5, 0.0}), pt({-0.5, 0.0})}, {0.5, 0.5});
    CHECK(mid.radial_norm() < 1e-9);

    const BallPoint first = frechet_mean({a, pt({0.1, 0.1})}, {1.0, 0.0});
    CHECK(dist(first, a) < 1e-9);
}

TEST_CASE("frechet_mean first-order optimality at the returned point") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<BallPoint> pts;
        std::vector<double> ws;
        double total = 0.0;
        for (int j = 0; j < 6; ++j) {
            pts.push_back(random_point(rng, 3, 0.5));
            ws.push_back(unif(rng));
            total += ws.back();
        }
        for (double& w : ws) w /= total;
        const BallPoint z = frechet_mean(pts, ws, 1e-10, 1000);
        std::vector<double> grad(3, 0.0);
        for (std::size_t j = 0; j < pts.size(); ++j) {
            const TangentVector l = log_map(z, pts[j]);
            for (std::size_t k = 0; k < 3; ++k) grad[k] += ws[j] * l.vec[k];
        }
        CHECK(norm(grad) <= 1e-10);
    }
}

TEST_CASE("frechet_mean reports non-convergence") {
    // three spread-out points so the tangent-mean initializer is not already
    // the minimizer
    try {
        frechet_mean({pt({0.5, 0.0}), pt({-0.5, 0.3}), pt({0.0, -0.6})}, {0.3, 0.3, 0.4},
                     1e-10, 1);
        FAIL("expected convergence_failure");
    } catch (const convergence_failure& e) {
        CHECK(e.residual > 0.0);
        CHECK(e.last_iterate.size() == 2);
    }
}

TEST_CASE("project_to_ball") {
    const std::vector<std::vector<double>> zeros(4, std::vector<double>(2, 0.0));
    for (const BallPoint& b : project_to_ball(zeros, kUnit))
        CHECK(b.radial_norm() == 0.0);

    // two symmetric rows standardize to +-1; scale 1 puts them at tanh(1)
    const auto two = project_to_ball({{1.0}, {-1.0}}, kUnit, 1.0);
    CHECK(two[0].radial_norm() == doctest::Approx(std::tanh(1.0)).epsilon(1e-12));
    CHECK(two[1].radial_norm() == doctest::Approx(std::tanh(1.0)).epsilon(1e-12));

    CHECK_THROWS_AS(project_to_ball({{0.0, std::nan("")}}, kUnit), invalid_data);
    CHECK_THROWS_AS(project_to_ball({}, kUnit), std::invalid_argument);
    CHECK_THROWS_AS(project_to_ball({{1.0}}, kUnit, -1.0), std::invalid_argument);
}

TEST_CASE("project_to_ball Euclidean limit") {
    std::mt19937_64 rng(37);
    std::normal_distribution<double> gauss(0.0, 2.0);
    std::vector<std::vector<double>> raw(10, std::vector<double>(3));
    for (auto& row : raw)
        for (double& x : row) x = gauss(rng);
    const Curvature tiny(-1e-10);
    const auto projected = project_to_ball(raw, tiny, 1.0);

    // recompute the standardized, scaled matrix directly
    std::vector<double> mean(3, 0.0), sd(3, 0.0);
    for (const auto& row : raw)
        for (std::size_t k = 0; k < 3; ++k) mean[k] += row[k] / double(raw.size());
    for (const auto& row : raw)
        for (std::size_t k = 0; k < 3; ++k)
            sd[k] += (row[k] - mean[k]) * (row[k] - mean[k]) / double(raw.size());
    for (double& s : sd) s = std::sqrt(s);
    std::vector<std::vector<double>> expect(raw.size(), std::vector<double>(3));
    double max_norm = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        double n2 = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            expect[i][k] = (raw[i][k] - mean[k]) / sd[k];
            n2 += expect[i][k] * expect[i][k];
        }
        max_norm = std::max(max_norm, std::sqrt(n2));
    }
    for (std::size_t i = 0; i < raw.size(); ++i)
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(std::abs(projected[i].coords()[k] - expect[i][k] / max_norm) < 1e-5);
}

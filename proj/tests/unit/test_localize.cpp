// SPDX-License-Identifier: Apache-2.0

#include "irsloc/localize.hpp"
#include "testutil.hpp"

#include <catch_amalgamated.hpp>

using namespace irsloc;

TEST_CASE("far closed form: zero residual on consistent inputs") {
    const Scene scene = testing::desk_scene();
    const Anchors a = scene.anchors();
    rng::Stream rs(11);
    for (int i = 0; i < 200; ++i) {
        const Point2 p = testing::random_point(scene, rs, 3.0, 80.0);
        const TargetEstimate e = localize_far(a, path_ranges(a, p).total(), bearing_at(a.irs, p));
        CHECK(distance(e.pos, p) < 1e-7 * (1.0 + distance(p, a.irs)));
        CHECK(e.objective < 1e-16);
        CHECK_FALSE(e.used_fallback);
    }
}

TEST_CASE("far closed form: vertical ray uses the bisection fallback") {
    const Scene scene = testing::desk_scene();
    const Anchors a = scene.anchors();
    const Point2 p = point_from_polar(a.irs, 12.0, kPi / 2);
    const TargetEstimate e = localize_far(a, path_ranges(a, p).total(), kPi / 2);
    CHECK(e.used_fallback);
    CHECK(distance(e.pos, p) < 1e-9);
}

TEST_CASE("far closed form: empty ellipse and bad weights are rejected") {
    const Anchors a = testing::desk_scene().anchors();
    CHECK_THROWS_AS(localize_far(a, a.irs_bs_distance(), 2.0), std::invalid_argument);
    CHECK_THROWS_AS(localize_far(a, a.irs_bs_distance() + 0.5 * distance(a.irs, a.user), 2.0), std::invalid_argument);
    FarSolveConfig bad;
    bad.weight = 1.5;
    CHECK_THROWS_AS(localize_far(a, 100.0, 2.0, bad), std::invalid_argument);
}

TEST_CASE("near residual Jacobian matches central differences") {
    const Scene scene = testing::desk_scene();
    const Anchors a = scene.anchors();
    rng::Stream rs(5);
    const NearSolveConfig cfg;
    for (int i = 0; i < 100; ++i) {
        const Point2 p = testing::random_point(scene, rs, 2.0, 29.0);
        const double total = path_ranges(a, p).total() + rs.normal();
        const double th = bearing_at(a.irs, p) + 0.01 * rs.normal();
        const double dh = distance(p, a.irs) + 0.3 * rs.normal();
        const NearResiduals r = near_residuals(a, p, total, th, dh, cfg);
        const double h = 1e-6;
        Eigen::Matrix<double, 3, 2> fd;
        for (int k = 0; k < 2; ++k) {
            Point2 lo = p, hi = p;
            (k == 0 ? lo.x : lo.y) -= h;
            (k == 0 ? hi.x : hi.y) += h;
            fd.col(k) = (near_residuals(a, hi, total, th, dh, cfg).r - near_residuals(a, lo, total, th, dh, cfg).r) / (2 * h);
        }
        CHECK((fd - r.J).norm() <= 1e-5 * r.J.norm());
    }
}

TEST_CASE("near solver recovers an exact target and reduces a perturbed objective") {
    const Scene scene = testing::desk_scene();
    const Anchors a = scene.anchors();
    rng::Stream rs(9);
    for (int i = 0; i < 100; ++i) {
        const Point2 p = testing::random_point(scene, rs, 2.0, 29.0);
        const double total = path_ranges(a, p).total();
        const double th = bearing_at(a.irs, p);
        const double d = distance(p, a.irs);
        // Range prior off by half a metre with zero weight on it: the optimum
        // is the ray-ellipse intersection, reached from a shifted start.
        NearSolveConfig two;
        two.weight_angle = 0.5;
        two.weight_ellipse = 0.5;
        const TargetEstimate e = localize_near(a, total, th, d + 0.5, two);
        CHECK(distance(e.pos, p) < 1e-6);
        CHECK(e.converged);
        // Inconsistent inputs: objective never exceeds the starting point.
        const double dh = d + 0.4;
        const TargetEstimate g = localize_near(a, total + 0.2, th + 0.003, dh);
        CHECK(g.objective <= near_objective(a, point_from_polar(a.irs, dh, th + 0.003), total + 0.2, th + 0.003, dh, {}));
        CHECK(std::isfinite(g.pos.x));
    }
}

TEST_CASE("near solver preconditions") {
    const Anchors a = testing::desk_scene().anchors();
    CHECK_THROWS_AS(localize_near(a, 50, 2.0, 0.0), std::invalid_argument);
    NearSolveConfig bad;
    bad.weight_angle = 0.8;
    bad.weight_ellipse = 0.8;
    CHECK_THROWS_AS(localize_near(a, 50, 2.0, 5.0, bad), std::invalid_argument);
}

TEST_CASE("angle wrapping") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(std::abs(wrap_angle(3 * kPi) - kPi) < 1e-12);
    CHECK(std::abs(wrap_angle(-kPi) - kPi) < 1e-12);
    CHECK(std::abs(wrap_angle(2 * kPi + 0.1) - 0.1) < 1e-12);
}

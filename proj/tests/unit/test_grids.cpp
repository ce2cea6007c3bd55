// SPDX-License-Identifier: Apache-2.0

#include "irsloc/grids.hpp"
#include "irsloc/ofdm.hpp"
#include "testutil.hpp"

#include <catch_amalgamated.hpp>

#include <set>

using namespace irsloc;

namespace {

Anchors remark_anchors() { return {{0, 0}, {20, 15}, {20, 20}}; }

GridConfig remark_config() {
    GridConfig g;
    g.delta_d = 0.1;
    g.delta_theta = kPi / 1800;
    g.theta_min = 0;
    g.theta_max = kPi / 2;
    g.max_range = 80;
    return g;
}

} // namespace

TEST_CASE("unrestricted lattice sizes") {
    const GridConfig g = remark_config();
    CHECK(g.num_angles() == 900);
    CHECK(near_zeta_max(g, 30) == 300);
    CHECK(full_near_size(g, 30) == 270000);
    CHECK(full_far_size(g) == 900);
    GridConfig half = g;
    half.theta_min = kPi / 2;
    half.theta_max = kPi;
    // pi is not a bearing, so the upper end stops one step short.
    CHECK(half.num_angles() == 899);
}

TEST_CASE("restricted grids equal an exhaustive scan of the lattice") {
    const Anchors a = remark_anchors();
    GridConfig g = remark_config();
    g.delta_d = 0.5;
    g.delta_theta = kPi / 180;
    const double b = 4e8;
    for (int tap : {30, 45, 60, 75, 100}) {
        const SpectrumGrid grid = build_grids(a, 30, b, g, tap);
        const RangeWindow w = tap_window(tap, b);
        std::set<std::pair<int, int>> want;
        for (int mu = g.mu_first(); mu <= g.mu_last(); ++mu)
            for (int z = 1; z <= near_zeta_max(g, 30); ++z)
                if (w.contains(total_range_at(a, g.range(z), g.theta(mu)))) want.insert({mu, z});
        std::set<std::pair<int, int>> got;
        for (const auto& c : grid.near)
            for (int z = c.zeta_lo; z <= c.zeta_hi; ++z) got.insert({c.mu, z});
        CHECK(got == want);
        CHECK(grid.near_size == want.size());

        // Far angles: the ray meets the window somewhere in (d_R, d_max].
        std::vector<int> far_want;
        for (int mu = g.mu_first(); mu <= g.mu_last(); ++mu) {
            bool hit = false;
            for (int i = 1; i <= 5000 && !hit; ++i)
                hit = w.contains(total_range_at(a, 30 + 50.0 * i / 5000, g.theta(mu)));
            if (hit) far_want.push_back(mu);
        }
        CHECK(grid.far == far_want);
    }
}

TEST_CASE("flattened near indexing is consistent") {
    const SpectrumGrid grid = build_grids(remark_anchors(), 30, 4e8, remark_config(), 50);
    const auto pts = grid.near_points();
    REQUIRE(pts.size() == grid.near_size);
    for (std::size_t i = 0; i < pts.size(); i += 97) CHECK(grid.near_point(i) == pts[i]);
    CHECK_THROWS_AS(grid.near_point(grid.near_size), std::out_of_range);
}

TEST_CASE("window beyond d_max leaves both grids empty") {
    const SpectrumGrid g = build_grids(remark_anchors(), 30, 1e8, remark_config(), 80);
    CHECK(g.near_empty());
    CHECK(g.far_empty());
}

TEST_CASE("every target's rounded lattice point lies in its own cluster grid") {
    const Scene sc = testing::desk_scene();
    const Anchors a = sc.anchors();
    GridConfig g = preset("desk").pipeline.grid;
    const double b = 1e8;
    rng::Stream rs(21);
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        const Point2 p = testing::random_point(sc, rs, 2.0, 29.0);
        // Snap the truth onto the lattice first so the window test is exact.
        const int mu = static_cast<int>(std::lround(bearing_at(sc.irs, p) / g.delta_theta));
        const int z = static_cast<int>(std::lround(distance(p, sc.irs) / g.delta_d));
        const double total = total_range_at(a, g.range(z), g.theta(mu));
        const SpectrumGrid grid = build_grids(a, sc.near_field_radius, b, g, tap_of_range(total, b));
        bool found = false;
        for (const auto& c : grid.near)
            if (c.mu == mu && z >= c.zeta_lo && z <= c.zeta_hi) found = true;
        CHECK(found);
        ++checked;
    }
    CHECK(checked == 60);
}

TEST_CASE("grid preconditions") {
    GridConfig g;
    g.theta_max = 4.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g = GridConfig{};
    g.delta_d = 0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    CHECK_THROWS_AS(build_grids(remark_anchors(), 30, 1e8, GridConfig{}, 0), std::out_of_range);
}

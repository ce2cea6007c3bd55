// SPDX-License-Identifier: Apache-2.0

#include "irsloc/grids.hpp"

#include "irsloc/ofdm.hpp"

#include <cmath>
#include <stdexcept>

namespace irsloc {

namespace {

// Guards lattice indices against rounding when a bound is an exact multiple
// of the step.
constexpr double kIndexEps = 1e-9;

} // namespace

void GridConfig::validate() const {
    if (!(delta_d > 0.0) || !(delta_theta > 0.0)) throw std::invalid_argument("grid: step sizes must be > 0");
    if (!(theta_min >= 0.0) || !(theta_max > theta_min) || theta_max > kPi)
        throw std::invalid_argument("grid: need 0 <= theta_min < theta_max <= pi");
    if (!(max_range > 0.0)) throw std::invalid_argument("grid: max_range must be > 0");
    if (!(window_margin >= 0.0)) throw std::invalid_argument("grid: window_margin must be >= 0");
}

int GridConfig::mu_first() const { return static_cast<int>(std::floor(theta_min / delta_theta + kIndexEps)) + 1; }

int GridConfig::mu_last() const {
    int mu = static_cast<int>(std::floor(theta_max / delta_theta + kIndexEps));
    // The AOA convention is [0, pi); pi itself is not a bearing.
    while (mu * delta_theta >= kPi - 1e-12) --mu;
    return mu;
}

std::pair<double, double> SpectrumGrid::near_point(std::size_t i) const {
    if (i >= near_size) throw std::out_of_range("near grid index out of range");
    // Columns are sorted by offset; binary search the owning column.
    std::size_t lo = 0, hi = near.size();
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (near[mid].offset <= i) lo = mid; else hi = mid;
    }
    const NearColumn& c = near[lo];
    return {config.range(c.zeta_lo + static_cast<int>(i - c.offset)), config.theta(c.mu)};
}

std::vector<std::pair<double, double>> SpectrumGrid::near_points() const {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(near_size);
    for (const auto& c : near)
        for (int z = c.zeta_lo; z <= c.zeta_hi; ++z) pts.emplace_back(config.range(z), config.theta(c.mu));
    return pts;
}

std::vector<double> SpectrumGrid::far_angles() const {
    std::vector<double> out;
    out.reserve(far.size());
    for (int mu : far) out.push_back(config.theta(mu));
    return out;
}

int near_zeta_max(const GridConfig& config, double near_field_radius) {
    return static_cast<int>(std::floor(std::min(near_field_radius, config.max_range) / config.delta_d + kIndexEps));
}

std::size_t full_near_size(const GridConfig& config, double near_field_radius) {
    config.validate();
    return static_cast<std::size_t>(config.num_angles()) *
           static_cast<std::size_t>(std::max(0, near_zeta_max(config, near_field_radius)));
}

std::size_t full_far_size(const GridConfig& config) {
    config.validate();
    return static_cast<std::size_t>(config.num_angles());
}

double total_range_at(const Anchors& anchors, double d, double theta) {
    return path_ranges(anchors, point_from_polar(anchors.irs, d, theta)).total();
}

SpectrumGrid build_grids(const Anchors& anchors, double near_field_radius, double bandwidth,
                         const GridConfig& config, int tap) {
    config.validate();
    if (tap < 1) throw std::out_of_range("build_grids: tap must be >= 1");
    const RangeWindow w = tap_window(tap, bandwidth);
    const double lo = w.lo - config.window_margin;
    const double hi = w.hi + config.window_margin;

    SpectrumGrid g;
    g.tap = tap;
    g.config = config;
    g.near_field_radius = near_field_radius;

    const int z_near = near_zeta_max(config, near_field_radius);
    const double d_far_lo = std::min(near_field_radius, config.max_range);
    for (int mu = config.mu_first(); mu <= config.mu_last(); ++mu) {
        const double theta = config.theta(mu);
        auto total = [&](int zeta) { return total_range_at(anchors, config.range(zeta), theta); };

        // The total range is non-decreasing along a ray from the IRS (the
        // user-target leg shrinks at most as fast as the target-IRS leg grows),
        // so the window is one contiguous zeta interval.
        if (z_near >= 1) {
            int a = 1, b = z_near + 1; // first zeta with total >= lo
            while (a < b) {
                const int m = a + (b - a) / 2;
                if (total(m) >= lo) b = m; else a = m + 1;
            }
            const int first = a;
            a = first; b = z_near + 1;   // first zeta with total >= hi
            while (a < b) {
                const int m = a + (b - a) / 2;
                if (total(m) >= hi) b = m; else a = m + 1;
            }
            const int last = a - 1;
            if (first <= last) {
                g.near.push_back({mu, first, last, g.near_size});
                g.near_size += static_cast<std::size_t>(last - first + 1);
            }
        }

        if (config.max_range > d_far_lo) {
            // Continuous check over d in (d_R, d_max].
            const double t_in = total_range_at(anchors, d_far_lo, theta);
            const double t_out = total_range_at(anchors, config.max_range, theta);
            if (t_in < hi && t_out >= lo) g.far.push_back(mu);
        }
    }
    return g;
}

} // namespace irsloc

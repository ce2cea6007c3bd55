// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/geometry.hpp"

#include <cstddef>
#include <vector>

namespace irsloc {

// Search lattice d = zeta * delta_d, theta = mu * delta_theta (zeta, mu >= 1)
// over the polar sector theta_min < theta <= theta_max, d <= max_range.
struct GridConfig {
    double delta_d = 0.1;                     // m
    double delta_theta = kPi / 1800.0;        // rad
    double theta_min = 0.0;                   // rad, exclusive
    double theta_max = kPi / 2.0;             // rad, inclusive
    double max_range = 80.0;                  // d_max, m
    // Widens every range window on both sides (m). Zero reproduces the exact
    // prior condition.
    double window_margin = 0.0;

    void validate() const;
    int mu_first() const;
    int mu_last() const;
    int num_angles() const { return mu_last() - mu_first() + 1; }
    double theta(int mu) const { return mu * delta_theta; }
    double range(int zeta) const { return zeta * delta_d; }
};

// Near-field lattice points of one angle, zeta in [zeta_lo, zeta_hi].
struct NearColumn {
    int mu = 0;
    int zeta_lo = 0;
    int zeta_hi = 0;
    std::size_t offset = 0; // index of (mu, zeta_lo) in the flattened grid

    int size() const { return zeta_hi - zeta_lo + 1; }
};

struct SpectrumGrid {
    int tap = 0;
    GridConfig config;
    double near_field_radius = 0.0;
    std::vector<NearColumn> near;   // ascending mu
    std::vector<int> far;           // ascending mu
    std::size_t near_size = 0;

    bool near_empty() const { return near_size == 0; }
    bool far_empty() const { return far.empty(); }

    // (d, theta) of flattened near index i.
    std::pair<double, double> near_point(std::size_t i) const;
    std::vector<std::pair<double, double>> near_points() const;
    std::vector<double> far_angles() const;
};

/// Largest lattice index zeta with zeta * delta_d <= d_R.
int near_zeta_max(const GridConfig& config, double near_field_radius);

/// |R^N| and |R^F| of the unrestricted lattice.
std::size_t full_near_size(const GridConfig& config, double near_field_radius);
std::size_t full_far_size(const GridConfig& config);

/// Lattice points whose implied position satisfies the range window of `tap`:
/// (tap - 1) c0 / B <= d_UT + d_TI + d_IB < tap c0 / B. Near points have
/// d <= d_R; a far angle is kept when its ray meets the window at some
/// d in (d_R, d_max].
SpectrumGrid build_grids(const Anchors& anchors, double near_field_radius, double bandwidth,
                         const GridConfig& config, int tap);

/// Total user -> point -> IRS -> BS range of the point at (d, theta).
double total_range_at(const Anchors& anchors, double d, double theta);

} // namespace irsloc

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/estimation.hpp"

#include <vector>

namespace irsloc {

/// Midpoint range of tap l (1-based): (2l - 1) c0 / (2B).
double cluster_range(int tap, double bandwidth);

struct ClusterDetection {
    std::vector<int> taps;        // detected l, ascending
    std::vector<double> ranges;   // midpoint range per detected tap
    RVector energy;               // g_l for every tap, index l - 1
    double threshold = 0.0;       // rho used for every tap
};

/// rho = 3 x median energy, floored at a tiny fraction of the largest energy
/// so exactly-zero groups never pass.
double default_cluster_threshold(const RVector& energy, double median_factor = 3.0);

/// Detected taps are those whose energy is >= rho and strictly positive.
ClusterDetection detect_clusters(const CirEstimate& estimate, double bandwidth, double rho);
ClusterDetection detect_clusters(const CirEstimate& estimate, double bandwidth);

} // namespace irsloc

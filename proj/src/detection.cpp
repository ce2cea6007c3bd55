// SPDX-License-Identifier: Apache-2.0

#include "irsloc/detection.hpp"

#include <algorithm>
#include <stdexcept>

namespace irsloc {

double cluster_range(int tap, double bandwidth) {
    if (tap < 1) throw std::out_of_range("cluster_range: tap index must be >= 1");
    return (2.0 * tap - 1.0) * kSpeedOfLight / (2.0 * bandwidth);
}

double default_cluster_threshold(const RVector& energy, double median_factor) {
    if (energy.size() == 0) return 0.0;
    std::vector<double> v(energy.data(), energy.data() + energy.size());
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    double median = *mid;
    if (v.size() % 2 == 0) {
        const double lower = *std::max_element(v.begin(), mid);
        median = 0.5 * (median + lower);
    }
    // With sparse estimates most groups are exactly zero and the median is 0.
    return std::max(median_factor * median, 1e-12 * energy.maxCoeff());
}

ClusterDetection detect_clusters(const CirEstimate& estimate, double bandwidth, double rho) {
    ClusterDetection d;
    d.energy = estimate.group_energy;
    d.threshold = rho;
    for (Eigen::Index i = 0; i < d.energy.size(); ++i) {
        const double g = d.energy[i];
        if (g > 0.0 && g >= rho) {
            const int l = static_cast<int>(i) + 1;
            d.taps.push_back(l);
            d.ranges.push_back(cluster_range(l, bandwidth));
        }
    }
    return d;
}

ClusterDetection detect_clusters(const CirEstimate& estimate, double bandwidth) {
    return detect_clusters(estimate, bandwidth, default_cluster_threshold(estimate.group_energy));
}

} // namespace irsloc

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/covariance.hpp"
#include "irsloc/grids.hpp"

#include <vector>

namespace irsloc {

inline constexpr double kMusicSentinel = 1e18;

/// Virtual steering vectors for every grid point, one column each, in the
/// grid's flattened order. Built in chunks with one GEMM per chunk.
CMatrix near_dictionary(const VirtualSteering& steering, const SpectrumGrid& grid);
CMatrix far_dictionary(const VirtualSteering& steering, const SpectrumGrid& grid);

/// |psi|^2 / |U^H psi|^2 per dictionary column; kMusicSentinel when the
/// denominator falls below 1e-18 |psi|^2.
RVector music_values(const CMatrix& dictionary, const CMatrix& noise_basis);

struct Spectra {
    RVector near; // aligned with SpectrumGrid::near_points()
    RVector far;  // aligned with SpectrumGrid::far
};

Spectra music_spectra(const VirtualSteering& steering, const SpectrumGrid& grid, const CMatrix& noise_basis);

struct Peak {
    FieldType field = FieldType::Far;
    std::size_t index = 0; // flattened grid index
    double d = kInfiniteRange;
    double theta = 0.0;
    double value = 0.0;
};

/// Local maxima: 8-neighbourhood on the (mu, zeta) lattice, +-1 in mu on the
/// far angle list. Sorted by value, largest first.
std::vector<Peak> near_local_maxima(const SpectrumGrid& grid, const RVector& values);
std::vector<Peak> far_local_maxima(const SpectrumGrid& grid, const RVector& values);

struct PeakSets {
    std::vector<Peak> far;
    std::vector<Peak> near;
};

/// Top-k local maxima per spectrum, then keep values strictly above the
/// field's threshold.
PeakSets select_peaks(const SpectrumGrid& grid, const Spectra& spectra, int k, double far_threshold,
                      double near_threshold);

/// Keeps values strictly above each field's threshold.
PeakSets threshold_peaks(const PeakSets& peaks, double far_threshold, double near_threshold);

enum class DedupRule {
    None,
    KeepNear, // drop the far duplicate
    KeepFar,  // drop the near duplicate
};

/// A far peak within delta_theta of a near peak whose range lies within
/// 2 delta_d of the near-field boundary is treated as the same target.
PeakSets deduplicate(const PeakSets& peaks, const GridConfig& grid, double near_field_radius, DedupRule rule);

} // namespace irsloc

// SPDX-License-Identifier: Apache-2.0

#include "irsloc/music.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irsloc {

namespace {

constexpr Eigen::Index kChunk = 2048;

// Fills `out` (M_I x n) with IRS responses for the given points, then returns P * out.
template <typename PointFn>
CMatrix dictionary(const VirtualSteering& steering, std::size_t count, PointFn point) {
    const Eigen::Index m_i = steering.P().cols();
    CMatrix dict(steering.dimension(), static_cast<Eigen::Index>(count));
    CMatrix a(m_i, kChunk);
    for (std::size_t start = 0; start < count; start += kChunk) {
        const Eigen::Index n = static_cast<Eigen::Index>(std::min<std::size_t>(kChunk, count - start));
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto [d, theta] = point(start + static_cast<std::size_t>(j));
            a.col(j) = irsloc::steering(steering.irs_array(), steering.wavelength(), d, theta);
        }
        dict.middleCols(static_cast<Eigen::Index>(start), n).noalias() = steering.P() * a.leftCols(n);
    }
    return dict;
}

} // namespace

CMatrix near_dictionary(const VirtualSteering& steering, const SpectrumGrid& grid) {
    const auto pts = grid.near_points();
    return dictionary(steering, pts.size(), [&](std::size_t i) { return pts[i]; });
}

CMatrix far_dictionary(const VirtualSteering& steering, const SpectrumGrid& grid) {
    const auto angles = grid.far_angles();
    return dictionary(steering, angles.size(),
                      [&](std::size_t i) { return std::pair<double, double>{kInfiniteRange, angles[i]}; });
}

RVector music_values(const CMatrix& dict, const CMatrix& noise_basis) {
    if (noise_basis.cols() == 0) throw std::invalid_argument("music: empty noise subspace");
    if (noise_basis.rows() != dict.rows()) throw std::invalid_argument("music: dimension mismatch");
    RVector out(dict.cols());
    for (Eigen::Index start = 0; start < dict.cols(); start += kChunk) {
        const Eigen::Index n = std::min(kChunk, dict.cols() - start);
        const CMatrix proj = noise_basis.adjoint() * dict.middleCols(start, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double num = dict.col(start + j).squaredNorm();
            const double den = proj.col(j).squaredNorm();
            out[start + j] = den < 1e-18 * num || num == 0.0 ? kMusicSentinel : num / den;
        }
    }
    return out;
}

Spectra music_spectra(const VirtualSteering& steering, const SpectrumGrid& grid, const CMatrix& noise_basis) {
    Spectra s;
    s.near = grid.near_empty() ? RVector() : music_values(near_dictionary(steering, grid), noise_basis);
    s.far = grid.far_empty() ? RVector() : music_values(far_dictionary(steering, grid), noise_basis);
    return s;
}

namespace {

void sort_desc(std::vector<Peak>& peaks) {
    std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.value > b.value; });
}

// Neighbour comparison: a strictly larger neighbour, or an equal one that
// comes earlier in flattened order, disqualifies the point.
bool beats(double v, std::size_t i, double nv, std::size_t ni) { return nv > v || (nv == v && ni < i); }

} // namespace

std::vector<Peak> near_local_maxima(const SpectrumGrid& grid, const RVector& values) {
    if (static_cast<std::size_t>(values.size()) != grid.near_size)
        throw std::invalid_argument("near_local_maxima: spectrum does not match grid");
    std::vector<Peak> peaks;
    const auto& cols = grid.near;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const NearColumn& col = cols[c];
        const NearColumn* left = c > 0 && cols[c - 1].mu == col.mu - 1 ? &cols[c - 1] : nullptr;
        const NearColumn* right = c + 1 < cols.size() && cols[c + 1].mu == col.mu + 1 ? &cols[c + 1] : nullptr;
        for (int z = col.zeta_lo; z <= col.zeta_hi; ++z) {
            const std::size_t i = col.offset + static_cast<std::size_t>(z - col.zeta_lo);
            const double v = values[static_cast<Eigen::Index>(i)];
            bool is_max = true;
            auto check = [&](const NearColumn* nc, int nz) {
                if (!is_max || nc == nullptr || nz < nc->zeta_lo || nz > nc->zeta_hi) return;
                const std::size_t ni = nc->offset + static_cast<std::size_t>(nz - nc->zeta_lo);
                if (beats(v, i, values[static_cast<Eigen::Index>(ni)], ni)) is_max = false;
            };
            for (int dz = -1; dz <= 1; ++dz) {
                check(left, z + dz);
                check(right, z + dz);
                if (dz != 0) check(&col, z + dz);
            }
            if (is_max) peaks.push_back({FieldType::Near, i, grid.config.range(z), grid.config.theta(col.mu), v});
        }
    }
    sort_desc(peaks);
    return peaks;
}

std::vector<Peak> far_local_maxima(const SpectrumGrid& grid, const RVector& values) {
    if (static_cast<std::size_t>(values.size()) != grid.far.size())
        throw std::invalid_argument("far_local_maxima: spectrum does not match grid");
    std::vector<Peak> peaks;
    const auto& mu = grid.far;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double v = values[static_cast<Eigen::Index>(i)];
        bool is_max = true;
        if (i > 0 && mu[i - 1] == mu[i] - 1 && beats(v, i, values[static_cast<Eigen::Index>(i - 1)], i - 1))
            is_max = false;
        if (i + 1 < mu.size() && mu[i + 1] == mu[i] + 1 && beats(v, i, values[static_cast<Eigen::Index>(i + 1)], i + 1))
            is_max = false;
        if (is_max) peaks.push_back({FieldType::Far, i, kInfiniteRange, grid.config.theta(mu[i]), v});
    }
    sort_desc(peaks);
    return peaks;
}

PeakSets threshold_peaks(const PeakSets& peaks, double far_threshold, double near_threshold) {
    PeakSets out;
    for (const auto& p : peaks.far)
        if (p.value > far_threshold) out.far.push_back(p);
    for (const auto& p : peaks.near)
        if (p.value > near_threshold) out.near.push_back(p);
    return out;
}

PeakSets select_peaks(const SpectrumGrid& grid, const Spectra& spectra, int k, double far_threshold,
                      double near_threshold) {
    PeakSets top;
    if (k <= 0) return top;
    auto take = [k](std::vector<Peak> all) {
        if (all.size() > static_cast<std::size_t>(k)) all.resize(static_cast<std::size_t>(k));
        return all;
    };
    if (!grid.far_empty()) top.far = take(far_local_maxima(grid, spectra.far));
    if (!grid.near_empty()) top.near = take(near_local_maxima(grid, spectra.near));
    return threshold_peaks(top, far_threshold, near_threshold);
}

PeakSets deduplicate(const PeakSets& peaks, const GridConfig& grid, double near_field_radius, DedupRule rule) {
    if (rule == DedupRule::None) return peaks;
    const double boundary = std::min(near_field_radius, grid.max_range);
    const double dtheta = grid.delta_theta * (1.0 + 1e-9);
    const double dd = 2.0 * grid.delta_d * (1.0 + 1e-9);
    std::vector<bool> far_dup(peaks.far.size(), false), near_dup(peaks.near.size(), false);
    for (std::size_t i = 0; i < peaks.far.size(); ++i)
        for (std::size_t j = 0; j < peaks.near.size(); ++j)
            if (std::abs(peaks.far[i].theta - peaks.near[j].theta) <= dtheta &&
                boundary - peaks.near[j].d <= dd) {
                far_dup[i] = true;
                near_dup[j] = true;
            }
    PeakSets out;
    for (std::size_t i = 0; i < peaks.far.size(); ++i)
        if (!(rule == DedupRule::KeepNear && far_dup[i])) out.far.push_back(peaks.far[i]);
    for (std::size_t j = 0; j < peaks.near.size(); ++j)
        if (!(rule == DedupRule::KeepFar && near_dup[j])) out.near.push_back(peaks.near[j]);
    return out;
}

} // namespace irsloc

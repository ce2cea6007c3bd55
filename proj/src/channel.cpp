// SPDX-License-Identifier: Apache-2.0

#include "irsloc/channel.hpp"

#include "irsloc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace irsloc {

IrsBsChannel irs_bs_channel(const Scene& scene, IrsBsModel model, double pathloss) {
    const int m_b = scene.bs_array.num_elements;
    const int m_i = scene.irs_array.num_elements;
    IrsBsChannel ch;
    ch.pathloss = pathloss;
    ch.model = model;
    ch.xi = std::atan2(scene.irs.y - scene.bs.y, scene.irs.x - scene.bs.x);
    ch.kappa = std::atan2(scene.bs.y - scene.irs.y, scene.bs.x - scene.irs.x);

    if (model == IrsBsModel::FarField) {
        const CVector a_b = steering_far(scene.bs_array, scene.wavelength, ch.kappa);
        const CVector a_i = steering_far(scene.irs_array, scene.wavelength, ch.xi);
        ch.G = a_b * a_i.transpose();
        return ch;
    }

    const double k0 = 2.0 * kPi / scene.wavelength;
    const double ref = distance(scene.bs, scene.irs);
    ch.G.resize(m_b, m_i);
    for (int b = 0; b < m_b; ++b) {
        const Point2 pb{scene.bs.x + b * scene.bs_array.spacing, scene.bs.y};
        for (int i = 0; i < m_i; ++i) {
            const Point2 pi{scene.irs.x + i * scene.irs_array.spacing, scene.irs.y};
            ch.G(b, i) = std::polar(1.0, -k0 * (distance(pb, pi) - ref));
        }
    }
    return ch;
}

int numerical_rank(const CMatrix& m, double rel_threshold) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    const RVector& s = svd.singularValues();
    if (s.size() == 0 || s[0] == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > rel_threshold * s[0]) ++rank;
    return rank;
}

cplx RcsDraw::at(std::size_t k, int t) const {
    if (k >= static_cast<std::size_t>(num_targets) || t < 0 || t >= num_blocks)
        throw std::out_of_range("RCS index out of range");
    return gamma[k * static_cast<std::size_t>(num_blocks) + static_cast<std::size_t>(t)];
}

RcsDraw draw_rcs(int num_targets, int num_blocks, std::uint64_t seed) {
    RcsDraw d;
    d.num_targets = num_targets;
    d.num_blocks = num_blocks;
    d.gamma.reserve(static_cast<std::size_t>(num_targets) * num_blocks);
    for (int k = 0; k < num_targets; ++k) {
        for (int t = 0; t < num_blocks; ++t) {
            rng::Stream s(seed, rng::Tag::Rcs, {static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(t)});
            d.gamma.push_back(s.complex_normal(1.0));
        }
    }
    return d;
}

CVector target_irs_channel(const Scene& scene, const RcsDraw& rcs, std::size_t k, int t, SteeringModel model) {
    const TargetTruth& tgt = scene.targets.at(k);
    const double d = distance_to_irs(scene, k);
    const double theta = aoa_to_irs(scene, k);
    const double effective = tgt.field == FieldType::Near ? d : kInfiniteRange;
    return tgt.pathloss * rcs.at(k, t) * steering(scene.irs_array, scene.wavelength, effective, theta, model);
}

CVector cascaded_channel(const IrsBsChannel& irs_bs, const CVector& phi, const CVector& r) {
    if (phi.size() != irs_bs.G.cols() || r.size() != irs_bs.G.cols())
        throw std::invalid_argument("cascaded_channel: dimension mismatch");
    for (Eigen::Index m = 0; m < phi.size(); ++m)
        if (std::abs(std::abs(phi[m]) - 1.0) > 1e-9)
            throw std::invalid_argument("cascaded_channel: reflection coefficients must be unit modulus");
    return irs_bs.pathloss * (irs_bs.G * phi.cwiseProduct(r));
}

const std::vector<std::size_t>& ClusterMap::omega(int tap) const {
    if (tap < 1 || tap > num_taps) throw std::out_of_range("tap index out of range");
    return members[static_cast<std::size_t>(tap - 1)];
}

std::vector<int> ClusterMap::occupied() const {
    std::vector<int> out;
    for (int l = 1; l <= num_taps; ++l)
        if (!members[static_cast<std::size_t>(l - 1)].empty()) out.push_back(l);
    return out;
}

int ClusterMap::max_count() const {
    std::size_t m = 0;
    for (const auto& s : members) m = std::max(m, s.size());
    return static_cast<int>(m);
}

ClusterMap assign_clusters(const Scene& scene, const OfdmConfig& config) {
    ClusterMap map;
    map.num_taps = config.num_taps;
    map.members.assign(static_cast<std::size_t>(config.num_taps), {});
    std::ostringstream bad;
    for (std::size_t k = 0; k < scene.targets.size(); ++k) {
        const double range = path_ranges(scene, k).total();
        const int l = tap_of_range(range, config.bandwidth());
        if (l > config.num_taps) {
            bad << " target " << k << " (total range " << range << " m -> tap " << l << ")";
            continue;
        }
        map.members[static_cast<std::size_t>(l - 1)].push_back(k);
    }
    if (!bad.str().empty())
        throw std::invalid_argument("assign_clusters: path exceeds the " + std::to_string(config.num_taps) +
                                    "-tap window:" + bad.str());
    return map;
}

CMatrix build_cir(const Scene& scene, const IrsBsChannel& irs_bs, const CVector& phi, const RcsDraw& rcs,
                  const ClusterMap& clusters, int t, SteeringModel model) {
    CMatrix h = CMatrix::Zero(clusters.num_taps, irs_bs.G.rows());
    for (int l = 1; l <= clusters.num_taps; ++l) {
        for (std::size_t k : clusters.omega(l)) {
            h.row(l - 1) += cascaded_channel(irs_bs, phi, target_irs_channel(scene, rcs, k, t, model)).transpose();
        }
    }
    return h;
}

SymbolBlockArray synthesize_cirs(const Scene& scene, const IrsBsChannel& irs_bs, const CMatrix& schedule,
                                 const RcsDraw& rcs, const ClusterMap& clusters, const OfdmConfig& config,
                                 SteeringModel model) {
    if (schedule.cols() == 0) throw std::invalid_argument("synthesize_cirs: empty schedule");
    SymbolBlockArray cirs(config.symbols_per_block, config.num_blocks, config.num_taps, irs_bs.G.rows());
    for (int t = 0; t < config.num_blocks; ++t)
        for (int q = 0; q < config.symbols_per_block; ++q)
            cirs.at(q, t) = build_cir(scene, irs_bs, schedule.col(q % schedule.cols()), rcs, clusters, t, model);
    return cirs;
}

double free_space_amplitude(double d) {
    if (!(d > 0.0)) throw std::invalid_argument("free_space_amplitude: distance must be > 0");
    return 1.0 / d;
}

} // namespace irsloc

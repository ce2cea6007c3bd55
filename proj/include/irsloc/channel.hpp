// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/geometry.hpp"
#include "irsloc/ofdm.hpp"
#include "irsloc/types.hpp"

#include <cstdint>
#include <vector>

namespace irsloc {

enum class IrsBsModel { NearField, FarField };

// LOS channel between the IRS and the BS, Gbar = pathloss * G.
struct IrsBsChannel {
    CMatrix G;              // M_B x M_I, unit-modulus entries
    double pathloss = 1.0;  // delta
    IrsBsModel model = IrsBsModel::NearField;
    double kappa = 0.0;     // AOA at the BS (far-field factorisation)
    double xi = 0.0;        // AOD at the IRS (far-field factorisation)
};

/// Near-field: per-element spherical phases referenced to the (0, 0) element pair.
/// Far-field: rank-1 product a_B(kappa) a_I(xi)^T from the IRS -> BS bearing.
IrsBsChannel irs_bs_channel(const Scene& scene, IrsBsModel model, double pathloss = 1.0);

/// Number of singular values above rel_threshold * sigma_max.
int numerical_rank(const CMatrix& m, double rel_threshold = 1e-10);

// Swerling-I reflectivities gamma_{k,t} ~ CN(0, 1), i.i.d. over targets and blocks.
struct RcsDraw {
    int num_targets = 0;
    int num_blocks = 0;
    std::vector<cplx> gamma;

    cplx at(std::size_t k, int t) const;
};

RcsDraw draw_rcs(int num_targets, int num_blocks, std::uint64_t seed);

/// r_{k,t} = beta_k gamma_{k,t} a_I(dbar_k, theta_k); far targets use the far-field manifold.
CVector target_irs_channel(const Scene& scene, const RcsDraw& rcs, std::size_t k, int t,
                           SteeringModel model = SteeringModel::Fresnel);

/// delta G diag(phi) r. Every |phi_m| must be 1.
CVector cascaded_channel(const IrsBsChannel& irs_bs, const CVector& phi, const CVector& r);

// Range clusters: tap l (1-based) -> targets whose total range falls in its window.
struct ClusterMap {
    int num_taps = 0;
    std::vector<std::vector<std::size_t>> members; // index l - 1

    const std::vector<std::size_t>& omega(int tap) const;
    int count(int tap) const { return static_cast<int>(omega(tap).size()); }
    std::vector<int> occupied() const;
    int max_count() const;
};

/// Groups targets by tap; throws if any total range falls outside the L-tap window.
ClusterMap assign_clusters(const Scene& scene, const OfdmConfig& config);

/// L x M_B tap matrix for one (q, t). `phi` is the reflection pattern used in
/// that symbol.
CMatrix build_cir(const Scene& scene, const IrsBsChannel& irs_bs, const CVector& phi, const RcsDraw& rcs,
                  const ClusterMap& clusters, int t, SteeringModel model = SteeringModel::Fresnel);

/// Tap matrices for every (q, t); symbol q uses column (q mod cols) of `schedule`.
SymbolBlockArray synthesize_cirs(const Scene& scene, const IrsBsChannel& irs_bs, const CMatrix& schedule,
                                 const RcsDraw& rcs, const ClusterMap& clusters, const OfdmConfig& config,
                                 SteeringModel model = SteeringModel::Fresnel);

/// Free-space amplitude 1/d; provided for realism experiments.
double free_space_amplitude(double d);

} // namespace irsloc

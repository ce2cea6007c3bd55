// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/covariance.hpp"
#include "irsloc/detection.hpp"
#include "irsloc/estimation.hpp"
#include "irsloc/grids.hpp"
#include "irsloc/localize.hpp"
#include "irsloc/music.hpp"
#include "irsloc/schedule.hpp"
#include "irsloc/somp.hpp"

#include <optional>
#include <vector>

namespace irsloc {

// Everything the receiver knows: anchors, arrays, the IRS-BS channel and the
// reflection schedule. Target positions are never visible here.
struct ReceiverModel {
    Anchors anchors;
    double wavelength = 0.1;
    double near_field_radius = 30.0;
    UlaGeometry irs_array;
    IrsBsChannel irs_bs;
    IrsSchedule schedule;
};

ReceiverModel receiver_model(const Scene& scene, const IrsBsChannel& irs_bs, const IrsSchedule& schedule);

struct PipelineConfig {
    // Negative omega selects default_omega with omega_factor.
    GroupLassoConfig lasso{-1.0};
    double omega_factor = 3.0;
    // Negative rho selects default_cluster_threshold with rho_factor.
    double rho = -1.0;
    double rho_factor = 3.0;
    GridConfig grid;
    AicForm aic = AicForm::WaxKailath;
    double far_threshold = 0.0;   // varsigma^F on the MUSIC value scale
    double near_threshold = 0.0;  // varsigma^N
    DedupRule dedup = DedupRule::KeepNear;
    FarSolveConfig far_solver;
    NearSolveConfig near_solver;
    bool run_somp = false;
    bool keep_spectra = false;
};

struct ClusterOutcome {
    int tap = 0;
    double range = 0.0;           // midpoint total range
    double energy = 0.0;
    int k_hat = 0;
    RVector eigenvalues;
    std::size_t near_grid = 0;
    std::size_t far_grid = 0;
    PeakSets raw_peaks;           // top-K per spectrum, before thresholds
    PeakSets music_peaks;         // after thresholding and dedup
    std::vector<SompAtom> somp_atoms;
    std::optional<SpectrumGrid> grid; // kept with the spectra
    std::optional<Spectra> spectra;
    std::string error;            // non-empty when the cluster was skipped
};

struct PipelineResult {
    CirEstimate cir;
    ClusterDetection detection;
    double omega = 0.0;
    std::vector<ClusterOutcome> clusters;
    std::vector<TargetEstimate> music;
    std::vector<TargetEstimate> somp;
};

/// Phase III for one peak / atom. Localisation failures (inconsistent
/// measurements) return std::nullopt.
std::optional<TargetEstimate> localize_detection(const ReceiverModel& rx, FieldType field, double d, double theta,
                                                 int tap, double bandwidth, const PipelineConfig& config);

/// Thresholds, then deduplication, applied to top-K peak sets.
PeakSets finalize_peaks(const PeakSets& raw, const PipelineConfig& config, double near_field_radius);

/// Phases I-III on frequency-domain observations.
PipelineResult run_pipeline(const ReceiverModel& rx, const OfdmConfig& ofdm, const PilotGrid& pilots,
                            const SymbolBlockArray& observations, const PipelineConfig& config);

/// Phase II-III for one cluster given its virtual snapshots (Q0 M_B x V).
ClusterOutcome analyze_cluster(const ReceiverModel& rx, const VirtualSteering& steering, const CMatrix& snapshots,
                               int tap, double bandwidth, const PipelineConfig& config);

} // namespace irsloc

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/channel.hpp"
#include "irsloc/pipeline.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace irsloc {

enum class ThresholdPolicy {
    Fixed,         // use PipelineConfig thresholds as given
    NoiseQuantile, // quantile of target-free MUSIC spectra
    Balanced,      // equalise missed detections and false alarms on calibration trials
};

struct HarnessConfig {
    Scene scene; // anchors, arrays, wavelength, d_R; its targets are ignored
    OfdmConfig ofdm;
    IrsBsModel irs_bs_model = IrsBsModel::NearField;
    double irs_bs_pathloss = 1.0; // delta
    double target_pathloss = 1.0; // beta
    // noise_var = p delta^2 beta^2 M_I / 10^(snr/10) unless disabled.
    double snr_db = 20.0;
    bool noise_from_snr = true;
    SteeringModel synthesis_model = SteeringModel::Fresnel;
    double twist = kDefaultTwist;

    int clusters_per_trial = 3;
    int targets_per_cluster = 4;
    double near_probability = 0.5;
    double min_target_range = 2.0; // m from the IRS
    int retry_budget = 20000;
    // When set, every trial uses these positions instead of random draws.
    std::optional<std::vector<Point2>> fixed_targets;

    int num_trials = 200;
    std::vector<double> detection_radii{1.0};
    std::uint64_t seed = 1;
    int workers = 1;

    PipelineConfig pipeline;
    ThresholdPolicy threshold_policy = ThresholdPolicy::Balanced;
    double threshold_quantile = 0.99;
    int assumed_targets = 4;
    int calibration_trials = 20;

    void validate() const;
};

double noise_variance_for_snr(const HarnessConfig& config);

/// Targets for one trial: clusters_per_trial distinct taps with
/// targets_per_cluster targets each, field type by coin flip, positions drawn
/// area-uniformly in the search sector and rejection-sampled into the tap.
Scene sample_scene(const HarnessConfig& config, std::uint64_t seed);

// Everything synthesised for one trial, before the receiver runs.
struct SimulatedTrial {
    Scene scene;
    OfdmConfig ofdm; // noise_var resolved
    IrsBsChannel irs_bs;
    IrsSchedule schedule;
    ClusterMap clusters;
    PilotGrid pilots;
    SymbolBlockArray observations;
};

SimulatedTrial simulate_trial(const HarnessConfig& config, std::uint64_t trial_seed);

/// Receiver-side pipeline on a simulated trial, using the configured pipeline
/// settings as given (no threshold calibration).
PipelineResult run_receiver(const HarnessConfig& config, const SimulatedTrial& sim, bool keep_spectra);

struct Thresholds {
    double far = 0.0;
    double near = 0.0;
};

struct ClusterPeaks {
    int tap = 0;
    int k_hat = 0;
    PeakSets raw; // top-K, unthresholded
};

struct TrialRecord {
    std::size_t index = 0;
    std::vector<TargetTruth> truth;
    std::vector<int> true_taps;
    std::vector<int> detected_taps;
    std::vector<ClusterPeaks> clusters;
    std::vector<TargetEstimate> somp;
    double seconds = 0.0;
};

TrialRecord run_trial_seeded(const HarnessConfig& config, std::uint64_t trial_seed, std::size_t index = 0);
TrialRecord run_trial(const HarnessConfig& config, std::size_t index);

/// Thresholded, deduplicated and localised MUSIC detections of one trial.
std::vector<TargetEstimate> music_estimates(const HarnessConfig& config, const TrialRecord& trial,
                                            const Thresholds& thresholds);

struct EventCounts {
    int targets_near = 0;
    int targets_far = 0;
    int md_near = 0;
    int md_far = 0;
    int fa_near = 0;
    int fa_far = 0;
    int estimates_near = 0;
    int estimates_far = 0;
};

/// MD: truth with no same-field estimate within radius. FA: estimate with no
/// same-field truth within radius. Matching is unassigned.
EventCounts classify_events(const std::vector<TargetTruth>& truth, const std::vector<TargetEstimate>& estimates,
                            double radius);

struct MetricsReport {
    EventCounts totals;
    int trials = 0;
    // Empty when the denominator is zero.
    std::optional<double> p_md_near, p_md_far, p_fa_near, p_fa_far;

    // P_MD + P_FA of one field type, or empty.
    std::optional<double> error_sum(FieldType f) const;
};

MetricsReport aggregate(const std::vector<EventCounts>& per_trial);

Thresholds calibrate_thresholds(const HarnessConfig& config);

struct RadiusMetrics {
    double radius = 0.0;
    MetricsReport music;
    MetricsReport somp;
};

struct ExperimentResult {
    Thresholds thresholds;
    std::vector<TrialRecord> trials;
    std::vector<RadiusMetrics> metrics; // one per detection radius
    double seconds = 0.0;
};

ExperimentResult run_experiment(const HarnessConfig& config);

/// Re-evaluates recorded trials at other thresholds / radii without re-running them.
std::vector<RadiusMetrics> evaluate(const HarnessConfig& config, const std::vector<TrialRecord>& trials,
                                    const Thresholds& thresholds, const std::vector<double>& radii);

enum class SweepAxis { BsAntennas, VirtualSymbols, TargetsPerCluster, DetectionRadius, Bandwidth, Snr, FixedProductQ0 };

SweepAxis parse_sweep_axis(const std::string& name);
std::string to_string(SweepAxis axis);

/// Applies one sweep value. FixedProductQ0 sets Q0 = value and
/// M_B = product / Q0.
void apply_sweep_value(HarnessConfig& config, SweepAxis axis, double value, int fixed_product = 12);

struct SweepPoint {
    double value = 0.0;
    RadiusMetrics metrics; // at the first detection radius (or the swept radius)
    Thresholds thresholds;
    double seconds = 0.0;
};

/// Every point reuses the base seed, so points see the same random scenes
/// wherever the swept parameter allows.
std::vector<SweepPoint> sweep(const HarnessConfig& config, SweepAxis axis, const std::vector<double>& values,
                              int fixed_product = 12);

/// Named presets: "desk" and "full".
HarnessConfig preset(const std::string& name);

} // namespace irsloc

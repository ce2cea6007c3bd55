// SPDX-License-Identifier: Apache-2.0

#include "irsloc/harness.hpp"

#include "irsloc/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <thread>

namespace irsloc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs body(i) for i in [0, n) on `workers` threads. Results are written by
// index, so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), std::max<std::size_t>(n, 1));
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < w; ++k) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

struct Sector {
    double theta_min, theta_max, r_min, r_near, r_max;
};

Sector sector_of(const HarnessConfig& c) {
    return {c.pipeline.grid.theta_min, c.pipeline.grid.theta_max, c.min_target_range, c.scene.near_field_radius,
            c.pipeline.grid.max_range};
}

// Area-uniform point of the requested field type inside the sector.
Point2 draw_point(const HarnessConfig& c, const Sector& s, FieldType field, rng::Stream& rs) {
    const double lo = field == FieldType::Near ? s.r_min : s.r_near;
    const double hi = field == FieldType::Near ? std::min(s.r_near, s.r_max) : s.r_max;
    for (;;) {
        const double theta = rs.uniform(s.theta_min, s.theta_max);
        if (theta <= s.theta_min) continue;
        const double d = std::sqrt(rs.uniform(lo * lo, hi * hi));
        const Point2 p = point_from_polar(c.scene.irs, d, theta);
        if (c.scene.field_of(p) == field && p.y < c.scene.irs.y) return p;
    }
}

// Interval of total ranges reachable by one field type, from a coarse scan.
// The region is connected, so the reachable set is an interval.
std::pair<double, double> total_span(const HarnessConfig& c, const Sector& s, FieldType field) {
    const Anchors a = c.scene.anchors();
    double lo = kInfiniteRange, hi = 0.0;
    const int n_theta = 181, n_d = 121;
    const double r_lo = field == FieldType::Near ? s.r_min : s.r_near;
    const double r_hi = field == FieldType::Near ? std::min(s.r_near, s.r_max) : s.r_max;
    for (int i = 0; i < n_theta; ++i) {
        const double theta = s.theta_min + (s.theta_max - s.theta_min) * (i + 0.5) / n_theta;
        for (int j = 0; j <= n_d; ++j) {
            const double d = r_lo + (r_hi - r_lo) * j / n_d;
            const double t = total_range_at(a, d, theta);
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
    }
    return {lo, hi};
}

} // namespace

void HarnessConfig::validate() const {
    scene.validate();
    ofdm.validate();
    pipeline.grid.validate();
    if (clusters_per_trial < 0 || targets_per_cluster < 1)
        throw std::invalid_argument("harness: cluster counts must be positive");
    if (!(near_probability >= 0.0 && near_probability <= 1.0))
        throw std::invalid_argument("harness: near_probability must be in [0, 1]");
    if (!(min_target_range > 0.0) || !(min_target_range < scene.near_field_radius))
        throw std::invalid_argument("harness: need 0 < min_target_range < d_R");
    if (!(pipeline.grid.max_range > scene.near_field_radius))
        throw std::invalid_argument("harness: grid max_range must exceed d_R");
    if (num_trials < 1) throw std::invalid_argument("harness: num_trials must be >= 1");
    if (detection_radii.empty()) throw std::invalid_argument("harness: need at least one detection radius");
    for (double r : detection_radii)
        if (!(r > 0.0)) throw std::invalid_argument("harness: detection radius must be > 0");
    if (retry_budget < 1) throw std::invalid_argument("harness: retry_budget must be >= 1");
    if (ofdm.virtual_symbols > scene.irs_array.num_elements)
        throw std::invalid_argument("harness: Q0 exceeds the number of IRS elements");
    if (assumed_targets < 0 || assumed_targets >= ofdm.virtual_symbols * scene.bs_array.num_elements)
        throw std::invalid_argument("harness: assumed_targets must be < Q0 M_B");
    if (!(threshold_quantile > 0.0 && threshold_quantile < 1.0))
        throw std::invalid_argument("harness: threshold_quantile must be in (0, 1)");
    if (calibration_trials < 1) throw std::invalid_argument("harness: calibration_trials must be >= 1");
    if (!(irs_bs_pathloss > 0.0) || !(target_pathloss > 0.0))
        throw std::invalid_argument("harness: path losses must be > 0");
}

double noise_variance_for_snr(const HarnessConfig& c) {
    if (!c.noise_from_snr) return c.ofdm.noise_var;
    const double signal = c.ofdm.power * c.irs_bs_pathloss * c.irs_bs_pathloss * c.target_pathloss *
                          c.target_pathloss * c.scene.irs_array.num_elements;
    return signal / std::pow(10.0, c.snr_db / 10.0);
}

Scene sample_scene(const HarnessConfig& c, std::uint64_t seed) {
    Scene scene = c.scene;
    scene.targets.clear();
    if (c.fixed_targets) {
        for (const Point2& p : *c.fixed_targets) scene.add_target(p, c.target_pathloss);
        scene.validate();
        return scene;
    }
    const Sector s = sector_of(c);
    const Anchors a = scene.anchors();
    const double bandwidth = c.ofdm.bandwidth();
    // Taps reachable by both field types.
    const auto near_span = total_span(c, s, FieldType::Near);
    const auto far_span = total_span(c, s, FieldType::Far);
    const double both_lo = std::max(near_span.first, far_span.first);
    const double both_hi = std::min(near_span.second, far_span.second);
    rng::Stream rs(seed, rng::Tag::Scene);

    auto coin = [&] { return rs.uniform() < c.near_probability ? FieldType::Near : FieldType::Far; };
    std::vector<int> taps;
    for (int cl = 0; cl < c.clusters_per_trial; ++cl) {
        // Seed target fixes the cluster tap. Taps that one field type cannot
        // reach are refused so every later coin flip is satisfiable.
        int tap = 0;
        Point2 seed_pos;
        for (int tries = 0;; ++tries) {
            if (tries >= c.retry_budget)
                throw std::runtime_error("sample_scene: retry budget exhausted while seeding cluster " +
                                         std::to_string(cl));
            const FieldType f = coin();
            const Point2 p = draw_point(c, s, f, rs);
            const int l = tap_of_range(path_ranges(a, p).total(), bandwidth);
            const RangeWindow w = tap_window(l, bandwidth);
            if (l > c.ofdm.num_taps || std::find(taps.begin(), taps.end(), l) != taps.end()) continue;
            if (w.hi <= both_lo || w.lo >= both_hi) continue;
            tap = l;
            seed_pos = p;
            break;
        }
        taps.push_back(tap);
        scene.add_target(seed_pos, c.target_pathloss);
        for (int k = 1; k < c.targets_per_cluster; ++k) {
            const FieldType f = coin();
            bool placed = false;
            for (int tries = 0; tries < c.retry_budget; ++tries) {
                const Point2 p = draw_point(c, s, f, rs);
                if (tap_of_range(path_ranges(a, p).total(), bandwidth) == tap) {
                    scene.add_target(p, c.target_pathloss);
                    placed = true;
                    break;
                }
            }
            if (!placed)
                throw std::runtime_error("sample_scene: retry budget exhausted placing a " +
                                         std::string(to_string(f)) + "-field target in tap " + std::to_string(tap));
        }
    }
    return scene;
}

SimulatedTrial simulate_trial(const HarnessConfig& c, std::uint64_t trial_seed) {
    SimulatedTrial sim;
    sim.ofdm = c.ofdm;
    sim.ofdm.noise_var = noise_variance_for_snr(c);
    HarnessConfig cfg = c;
    cfg.ofdm = sim.ofdm;
    sim.scene = sample_scene(cfg, trial_seed);
    sim.irs_bs = irs_bs_channel(sim.scene, cfg.irs_bs_model, cfg.irs_bs_pathloss);
    sim.schedule = design_irs_schedule(sim.irs_bs, cfg.ofdm.virtual_symbols, cfg.twist);
    const RcsDraw rcs = draw_rcs(static_cast<int>(sim.scene.targets.size()), cfg.ofdm.num_blocks, trial_seed);
    sim.clusters = assign_clusters(sim.scene, cfg.ofdm);
    const SymbolBlockArray cirs =
        synthesize_cirs(sim.scene, sim.irs_bs, sim.schedule.phi, rcs, sim.clusters, cfg.ofdm, cfg.synthesis_model);
    sim.pilots = generate_pilots(cfg.ofdm, trial_seed);
    sim.observations = simulate_freq_rx(cfg.ofdm, sim.pilots, cirs, trial_seed);
    return sim;
}

PipelineResult run_receiver(const HarnessConfig& c, const SimulatedTrial& sim, bool keep_spectra) {
    PipelineConfig pc = c.pipeline;
    pc.run_somp = true;
    pc.keep_spectra = keep_spectra;
    return run_pipeline(receiver_model(sim.scene, sim.irs_bs, sim.schedule), sim.ofdm, sim.pilots, sim.observations,
                        pc);
}

TrialRecord run_trial_seeded(const HarnessConfig& c, std::uint64_t trial_seed, std::size_t index) {
    const auto t0 = Clock::now();
    const SimulatedTrial sim = simulate_trial(c, trial_seed);
    const PipelineResult res = run_receiver(c, sim, false);

    TrialRecord rec;
    rec.index = index;
    rec.truth = sim.scene.targets;
    rec.true_taps = sim.clusters.occupied();
    rec.detected_taps = res.detection.taps;
    for (const auto& cl : res.clusters) rec.clusters.push_back({cl.tap, cl.k_hat, cl.raw_peaks});
    rec.somp = res.somp;
    rec.seconds = seconds_since(t0);
    return rec;
}

TrialRecord run_trial(const HarnessConfig& c, std::size_t index) {
    return run_trial_seeded(c, rng::stream_seed(c.seed, rng::Tag::Trial, {index}), index);
}

namespace {

ReceiverModel anchors_only(const HarnessConfig& c) {
    ReceiverModel rx;
    rx.anchors = c.scene.anchors();
    rx.wavelength = c.scene.wavelength;
    rx.near_field_radius = c.scene.near_field_radius;
    rx.irs_array = c.scene.irs_array;
    return rx;
}

std::vector<TargetEstimate> localize_peaks(const HarnessConfig& c, const ReceiverModel& rx, int tap,
                                           const PeakSets& peaks) {
    std::vector<TargetEstimate> out;
    for (const auto* set : {&peaks.far, &peaks.near})
        for (const Peak& p : *set)
            if (auto est = localize_detection(rx, p.field, p.d, p.theta, tap, c.ofdm.bandwidth(), c.pipeline))
                out.push_back(*est);
    return out;
}

} // namespace

std::vector<TargetEstimate> music_estimates(const HarnessConfig& c, const TrialRecord& trial,
                                            const Thresholds& thresholds) {
    const ReceiverModel rx = anchors_only(c);
    PipelineConfig pc = c.pipeline;
    pc.far_threshold = thresholds.far;
    pc.near_threshold = thresholds.near;
    std::vector<TargetEstimate> out;
    for (const auto& cl : trial.clusters) {
        const auto est = localize_peaks(c, rx, cl.tap, finalize_peaks(cl.raw, pc, rx.near_field_radius));
        out.insert(out.end(), est.begin(), est.end());
    }
    return out;
}

EventCounts classify_events(const std::vector<TargetTruth>& truth, const std::vector<TargetEstimate>& estimates,
                            double radius) {
    EventCounts ev;
    for (const auto& t : truth) {
        const bool near = t.field == FieldType::Near;
        (near ? ev.targets_near : ev.targets_far)++;
        bool hit = false;
        for (const auto& e : estimates)
            if (e.field == t.field && distance(e.pos, t.pos) <= radius) {
                hit = true;
                break;
            }
        if (!hit) (near ? ev.md_near : ev.md_far)++;
    }
    for (const auto& e : estimates) {
        const bool near = e.field == FieldType::Near;
        (near ? ev.estimates_near : ev.estimates_far)++;
        bool hit = false;
        for (const auto& t : truth)
            if (t.field == e.field && distance(e.pos, t.pos) <= radius) {
                hit = true;
                break;
            }
        if (!hit) (near ? ev.fa_near : ev.fa_far)++;
    }
    return ev;
}

std::optional<double> MetricsReport::error_sum(FieldType f) const {
    const auto& md = f == FieldType::Near ? p_md_near : p_md_far;
    const auto& fa = f == FieldType::Near ? p_fa_near : p_fa_far;
    if (!md || !fa) return std::nullopt;
    return *md + *fa;
}

MetricsReport aggregate(const std::vector<EventCounts>& per_trial) {
    if (per_trial.empty()) throw std::invalid_argument("aggregate: need at least one trial");
    MetricsReport r;
    r.trials = static_cast<int>(per_trial.size());
    EventCounts& s = r.totals;
    for (const auto& e : per_trial) {
        s.targets_near += e.targets_near;
        s.targets_far += e.targets_far;
        s.md_near += e.md_near;
        s.md_far += e.md_far;
        s.fa_near += e.fa_near;
        s.fa_far += e.fa_far;
        s.estimates_near += e.estimates_near;
        s.estimates_far += e.estimates_far;
    }
    auto ratio = [](int num, int den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / den;
    };
    // False alarms are normalised by the target count, as in the MD ratio.
    r.p_md_near = ratio(s.md_near, s.targets_near);
    r.p_md_far = ratio(s.md_far, s.targets_far);
    r.p_fa_near = ratio(s.fa_near, s.targets_near);
    r.p_fa_far = ratio(s.fa_far, s.targets_far);
    return r;
}

namespace {

std::vector<TrialRecord> run_trials(const HarnessConfig& c, rng::Tag tag, int count) {
    std::vector<TrialRecord> out(static_cast<std::size_t>(count));
    parallel_for(out.size(), c.workers, [&](std::size_t i) {
        out[i] = run_trial_seeded(c, rng::stream_seed(c.seed, tag, {i}), i);
    });
    return out;
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    return i + 1 < v.size() ? v[i] * (1.0 - frac) + v[i + 1] * frac : v[i];
}

Thresholds noise_quantile_thresholds(const HarnessConfig& c) {
    // Target-free virtual snapshots: white noise with the run's dimensions.
    // MUSIC values are scale-free, so the noise level itself is irrelevant.
    std::vector<double> near_vals, far_vals;
    const double bandwidth = c.ofdm.bandwidth();
    for (int i = 0; i < c.calibration_trials; ++i) {
        const std::uint64_t seed = rng::stream_seed(c.seed, rng::Tag::Calibration, {static_cast<std::uint64_t>(i)});
        const Scene scene = sample_scene(c, seed);
        const IrsBsChannel irs_bs = irs_bs_channel(scene, c.irs_bs_model, c.irs_bs_pathloss);
        const IrsSchedule schedule = design_irs_schedule(irs_bs, c.ofdm.virtual_symbols, c.twist);
        const VirtualSteering steering(irs_bs, schedule, scene.irs_array, scene.wavelength);
        const ClusterMap clusters = assign_clusters(scene, c.ofdm);
        rng::Stream rs(seed, rng::Tag::FreqNoise);
        for (int tap : clusters.occupied()) {
            CMatrix x(steering.dimension(), c.ofdm.num_blocks);
            for (Eigen::Index j = 0; j < x.cols(); ++j)
                for (Eigen::Index r = 0; r < x.rows(); ++r) x(r, j) = rs.complex_normal(1.0);
            const Eigenpairs eig = hermitian_eig(sample_covariance(x));
            const CMatrix noise = noise_subspace(eig, c.assumed_targets);
            const SpectrumGrid grid = build_grids(scene.anchors(), scene.near_field_radius, bandwidth, c.pipeline.grid, tap);
            const Spectra sp = music_spectra(steering, grid, noise);
            near_vals.insert(near_vals.end(), sp.near.data(), sp.near.data() + sp.near.size());
            far_vals.insert(far_vals.end(), sp.far.data(), sp.far.data() + sp.far.size());
        }
    }
    return {quantile(far_vals, c.threshold_quantile), quantile(near_vals, c.threshold_quantile)};
}

// Candidate thresholds: 0 plus every recorded raw peak value of the field.
std::vector<double> candidates(const std::vector<TrialRecord>& trials, FieldType f) {
    std::vector<double> v{0.0};
    for (const auto& t : trials)
        for (const auto& cl : t.clusters)
            for (const Peak& p : f == FieldType::Near ? cl.raw.near : cl.raw.far) v.push_back(p.value);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

Thresholds balanced_thresholds(const HarnessConfig& c) {
    HarnessConfig cal = c;
    cal.workers = c.workers;
    const auto trials = run_trials(cal, rng::Tag::Calibration, c.calibration_trials);
    const double radius = c.detection_radii.front();

    auto counts = [&](const Thresholds& th) {
        std::vector<EventCounts> ev;
        for (const auto& t : trials) ev.push_back(classify_events(t.truth, music_estimates(c, t, th), radius));
        return aggregate(ev).totals;
    };
    Thresholds th;
    const auto near_c = candidates(trials, FieldType::Near);
    const auto far_c = candidates(trials, FieldType::Far);
    // Coordinate passes: deduplication couples the two fields.
    for (int pass = 0; pass < 2; ++pass) {
        for (FieldType f : {FieldType::Near, FieldType::Far}) {
            const auto& cand = f == FieldType::Near ? near_c : far_c;
            double best_gap = kInfiniteRange, best_sum = kInfiniteRange, best_value = 0.0;
            for (double v : cand) {
                Thresholds trial_th = th;
                (f == FieldType::Near ? trial_th.near : trial_th.far) = v;
                const EventCounts e = counts(trial_th);
                const int md = f == FieldType::Near ? e.md_near : e.md_far;
                const int fa = f == FieldType::Near ? e.fa_near : e.fa_far;
                const double gap = std::abs(md - fa);
                const double sum = md + fa;
                if (gap < best_gap || (gap == best_gap && sum < best_sum)) {
                    best_gap = gap;
                    best_sum = sum;
                    best_value = v;
                }
            }
            (f == FieldType::Near ? th.near : th.far) = best_value;
        }
    }
    return th;
}

} // namespace

Thresholds calibrate_thresholds(const HarnessConfig& c) {
    switch (c.threshold_policy) {
    case ThresholdPolicy::Fixed: return {c.pipeline.far_threshold, c.pipeline.near_threshold};
    case ThresholdPolicy::NoiseQuantile: return noise_quantile_thresholds(c);
    case ThresholdPolicy::Balanced: return balanced_thresholds(c);
    }
    return {};
}

std::vector<RadiusMetrics> evaluate(const HarnessConfig& c, const std::vector<TrialRecord>& trials,
                                    const Thresholds& thresholds, const std::vector<double>& radii) {
    std::vector<std::vector<TargetEstimate>> music;
    music.reserve(trials.size());
    for (const auto& t : trials) music.push_back(music_estimates(c, t, thresholds));
    std::vector<RadiusMetrics> out;
    for (double r : radii) {
        std::vector<EventCounts> m, s;
        for (std::size_t i = 0; i < trials.size(); ++i) {
            m.push_back(classify_events(trials[i].truth, music[i], r));
            s.push_back(classify_events(trials[i].truth, trials[i].somp, r));
        }
        out.push_back({r, aggregate(m), aggregate(s)});
    }
    return out;
}

ExperimentResult run_experiment(const HarnessConfig& c) {
    c.validate();
    const auto t0 = Clock::now();
    ExperimentResult res;
    HarnessConfig cfg = c;
    cfg.ofdm.noise_var = noise_variance_for_snr(c);
    cfg.noise_from_snr = false;
    res.thresholds = calibrate_thresholds(cfg);
    res.trials = run_trials(cfg, rng::Tag::Trial, cfg.num_trials);
    res.metrics = evaluate(cfg, res.trials, res.thresholds, cfg.detection_radii);
    res.seconds = seconds_since(t0);
    return res;
}

SweepAxis parse_sweep_axis(const std::string& n) {
    static const std::map<std::string, SweepAxis> names{
        {"M_B", SweepAxis::BsAntennas},          {"Q0", SweepAxis::VirtualSymbols},
        {"K", SweepAxis::TargetsPerCluster},     {"R_e", SweepAxis::DetectionRadius},
        {"bandwidth", SweepAxis::Bandwidth},     {"snr", SweepAxis::Snr},
        {"Q0_fixed_product", SweepAxis::FixedProductQ0}};
    const auto it = names.find(n);
    if (it == names.end()) throw std::invalid_argument("unknown sweep axis '" + n + "'");
    return it->second;
}

std::string to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::BsAntennas: return "M_B";
    case SweepAxis::VirtualSymbols: return "Q0";
    case SweepAxis::TargetsPerCluster: return "K";
    case SweepAxis::DetectionRadius: return "R_e";
    case SweepAxis::Bandwidth: return "bandwidth";
    case SweepAxis::Snr: return "snr";
    case SweepAxis::FixedProductQ0: return "Q0_fixed_product";
    }
    return "?";
}

void apply_sweep_value(HarnessConfig& c, SweepAxis axis, double value, int fixed_product) {
    auto as_int = [&](double v) {
        const long r = std::lround(v);
        if (std::abs(v - static_cast<double>(r)) > 1e-9 || r < 1)
            throw std::invalid_argument("sweep value " + std::to_string(v) + " must be a positive integer");
        return static_cast<int>(r);
    };
    auto set_q0 = [&](int q0) {
        c.ofdm.virtual_symbols = q0;
        c.ofdm.symbols_per_block = std::max(c.ofdm.symbols_per_block, q0);
    };
    switch (axis) {
    case SweepAxis::BsAntennas: c.scene.bs_array.num_elements = as_int(value); break;
    case SweepAxis::VirtualSymbols: set_q0(as_int(value)); break;
    case SweepAxis::TargetsPerCluster: c.targets_per_cluster = as_int(value); break;
    case SweepAxis::DetectionRadius: c.detection_radii = {value}; break;
    case SweepAxis::Bandwidth: c.ofdm.subcarrier_spacing = value / c.ofdm.num_subcarriers; break;
    case SweepAxis::Snr: c.snr_db = value; break;
    case SweepAxis::FixedProductQ0: {
        const int q0 = as_int(value);
        if (fixed_product % q0 != 0)
            throw std::invalid_argument("Q0 = " + std::to_string(q0) + " does not divide the fixed product");
        set_q0(q0);
        c.ofdm.symbols_per_block = q0;
        c.scene.bs_array.num_elements = fixed_product / q0;
        break;
    }
    }
}

std::vector<SweepPoint> sweep(const HarnessConfig& c, SweepAxis axis, const std::vector<double>& values,
                              int fixed_product) {
    std::vector<SweepPoint> out;
    if (axis == SweepAxis::DetectionRadius) {
        // One run; the radius only enters the event classification.
        HarnessConfig base = c;
        base.detection_radii = {values.empty() ? 1.0 : values.front()};
        const ExperimentResult r = run_experiment(base);
        const auto metrics = evaluate(c, r.trials, r.thresholds, values);
        for (const auto& m : metrics) out.push_back({m.radius, m, r.thresholds, r.seconds});
        return out;
    }
    for (double v : values) {
        HarnessConfig point = c;
        apply_sweep_value(point, axis, v, fixed_product);
        if (point.assumed_targets >= point.ofdm.virtual_symbols * point.scene.bs_array.num_elements)
            point.assumed_targets = point.ofdm.virtual_symbols * point.scene.bs_array.num_elements - 1;
        const ExperimentResult r = run_experiment(point);
        out.push_back({v, r.metrics.front(), r.thresholds, r.seconds});
    }
    return out;
}

HarnessConfig preset(const std::string& name) {
    HarnessConfig c;
    c.scene.user = {0.0, 0.0};
    c.scene.irs = {50.0, 50.0};
    c.scene.bs = {50.0, 43.0};
    c.scene.wavelength = 0.1;
    c.scene.irs_array = {64, 0.05};
    c.scene.bs_array = {4, 0.05};
    c.scene.near_field_radius = 30.0;
    c.snr_db = 40.0;
    c.ofdm.num_subcarriers = 256;
    c.ofdm.subcarrier_spacing = 1e8 / 256.0;
    c.ofdm.cp_length = 88;
    c.ofdm.num_taps = 88;
    c.ofdm.symbols_per_block = 4;
    c.ofdm.virtual_symbols = 4;
    c.ofdm.num_blocks = 32;
    // Quarter facing away from the user; see README.
    c.pipeline.grid.theta_min = kPi / 2.0;
    c.pipeline.grid.theta_max = kPi;
    c.pipeline.grid.max_range = 60.0;
    c.clusters_per_trial = 3;
    c.targets_per_cluster = 4;
    c.assumed_targets = 4;
    c.num_trials = 200;
    if (name == "desk") return c;
    if (name == "full") {
        c.scene.irs_array = {256, 0.05};
        c.scene.near_field_radius = 90.0;
        c.ofdm.num_subcarriers = 834;
        c.ofdm.subcarrier_spacing = 1e8 / 834.0;
        c.pipeline.grid.max_range = 140.0;
        c.targets_per_cluster = 8;
        c.assumed_targets = 8;
        c.num_trials = 10000;
        return c;
    }
    throw std::invalid_argument("unknown preset '" + name + "' (expected desk or full)");
}

} // namespace irsloc

// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. One PASS/FAIL line per criterion; `--only NAME` runs one.
// Exit status is non-zero when any selected criterion fails.

#include "irsloc/harness.hpp"
#include "irsloc/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace irsloc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// Uniform (d, theta) draw in the desk sector facing away from the user.
std::pair<double, double> draw_polar(rng::Stream& rs, double d_lo, double d_hi) {
    return {rs.uniform(d_lo, d_hi), rs.uniform(kPi / 2 + 0.01, kPi - 0.01)};
}

double model_range(FieldType f, double d) { return f == FieldType::Near ? d : kInfiniteRange; }

// ---------------------------------------------------------------------------

Outcome virtual_rank() {
    const auto t0 = Clock::now();
    const HarnessConfig c = preset("desk");
    const IrsBsChannel g = irs_bs_channel(c.scene, IrsBsModel::NearField);
    const IrsSchedule sched = design_irs_schedule(g, c.ofdm.virtual_symbols);
    const VirtualSteering vs(g, sched, c.scene.irs_array, c.scene.wavelength);
    rng::Stream rs(2024);
    int full = 0;
    double worst = 1.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int k = rs.uniform_int(2, 4);
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i < k; ++i) {
            const auto [d, th] = draw_polar(rs, 2.0, c.pipeline.grid.max_range);
            pts.emplace_back(model_range(c.scene.field_of(point_from_polar(c.scene.irs, d, th)), d), th);
        }
        const RankReport r = verify_rank(vs, pts, 1e-8);
        worst = std::min(worst, r.condition);
        full += r.rank == k;
    }
    // Negative control: all-ones patterns with a rank-one channel.
    const IrsBsChannel g1 = irs_bs_channel(c.scene, IrsBsModel::FarField);
    const VirtualSteering neg(g1, constant_schedule(c.scene.irs_array.num_elements, c.ofdm.virtual_symbols),
                              c.scene.irs_array, c.scene.wavelength);
    const RankReport nr = verify_rank(neg, {{10.0, 2.0}, {kInfiniteRange, 2.4}, {20.0, 2.9}}, 1e-8);
    const double secs = seconds_since(t0);
    return {full == 100 && nr.rank == 1 && secs < 30.0,
            fmt("full rank in %d/100 (worst sigma_min/sigma_max %.2e), negative control rank %d, %.1f s", full, worst,
                nr.rank, secs)};
}

// ---------------------------------------------------------------------------

struct MixedCluster {
    double dn, tn; // near target
    double tf, df; // far target; df only places it
    int tap;
};

std::optional<MixedCluster> draw_mixed(rng::Stream& rs, const Anchors& a, double d_r, double d_max, double b) {
    const auto [dn, tn] = draw_polar(rs, 3.0, d_r - 1.0);
    const int tap = tap_of_range(total_range_at(a, dn, tn), b);
    for (int i = 0; i < 100000; ++i) {
        const auto [df, tf] = draw_polar(rs, d_r + 1.0, d_max);
        if (tap_of_range(total_range_at(a, df, tf), b) == tap) return MixedCluster{dn, tn, tf, df, tap};
    }
    return std::nullopt;
}

// Exact covariance of one near and one far source. Estimates are the largest
// peak of each spectrum; field typing takes the two largest peaks over both
// spectra and requires one of each kind.
struct MixedScore {
    bool far_ok, near_angle_ok, near_range_ok, typed_ok;
};

MixedScore score_mixed(const HarnessConfig& c, const VirtualSteering& vs, const MixedCluster& m) {
    const GridConfig& gc = c.pipeline.grid;
    const std::vector<std::pair<double, double>> pts{{m.dn, m.tn}, {kInfiniteRange, m.tf}};
    const CMatrix r = analytic_covariance(vs.matrix(pts), RVector::Ones(2), 1e-6);
    const CMatrix u = noise_subspace(hermitian_eig(r), 2);
    const SpectrumGrid g = build_grids(c.scene.anchors(), c.scene.near_field_radius, c.ofdm.bandwidth(), gc, m.tap);
    const PeakSets p = select_peaks(g, music_spectra(vs, g, u), 2, 0.0, 0.0);
    MixedScore s{false, false, false, false};
    if (p.far.empty() || p.near.empty()) return s;
    const double tol = 1e-9;
    s.far_ok = std::abs(p.far[0].theta - m.tf) <= gc.delta_theta + tol;
    s.near_angle_ok = std::abs(p.near[0].theta - m.tn) <= gc.delta_theta + tol;
    s.near_range_ok = std::abs(p.near[0].d - m.dn) <= gc.delta_d + tol;
    std::vector<Peak> all = p.near;
    all.insert(all.end(), p.far.begin(), p.far.end());
    std::sort(all.begin(), all.end(), [](const Peak& x, const Peak& y) { return x.value > y.value; });
    s.typed_ok = all.size() >= 2 && all[0].field != all[1].field;
    return s;
}

Outcome asymptotic_music() {
    const auto t0 = Clock::now();
    const HarnessConfig c = preset("desk");
    const Anchors a = c.scene.anchors();
    const IrsBsChannel g = irs_bs_channel(c.scene, IrsBsModel::NearField);
    const VirtualSteering vs(g, design_irs_schedule(g, c.ofdm.virtual_symbols), c.scene.irs_array,
                             c.scene.wavelength);
    rng::Stream rs(77);
    const int n = 30;
    int far_ok = 0, near_th = 0, near_d = 0, typed = 0, all_ok = 0, drawn = 0;
    int lattice_ok = 0, lattice_n = 0;
    while (drawn < n) {
        const auto m = draw_mixed(rs, a, c.scene.near_field_radius, c.pipeline.grid.max_range, c.ofdm.bandwidth());
        if (!m) continue;
        ++drawn;
        const MixedScore s = score_mixed(c, vs, *m);
        far_ok += s.far_ok;
        near_th += s.near_angle_ok;
        near_d += s.near_range_ok;
        typed += s.typed_ok;
        all_ok += s.far_ok && s.near_angle_ok && s.near_range_ok && s.typed_ok;
        // Same cluster snapped onto the search lattice (diagnostic only).
        const GridConfig& gc = c.pipeline.grid;
        MixedCluster snapped = *m;
        snapped.tn = gc.theta(static_cast<int>(std::lround(m->tn / gc.delta_theta)));
        snapped.dn = gc.range(static_cast<int>(std::lround(m->dn / gc.delta_d)));
        snapped.tf = gc.theta(static_cast<int>(std::lround(m->tf / gc.delta_theta)));
        if (tap_of_range(total_range_at(a, snapped.dn, snapped.tn), c.ofdm.bandwidth()) == m->tap &&
            tap_of_range(total_range_at(a, m->df, snapped.tf), c.ofdm.bandwidth()) == m->tap) {
            const MixedScore q = score_mixed(c, vs, snapped);
            ++lattice_n;
            lattice_ok += q.far_ok && q.near_angle_ok && q.near_range_ok && q.typed_ok;
        }
    }
    const double secs = seconds_since(t0);
    return {all_ok == n && secs < 120.0,
            fmt("%d/%d clusters fully correct (far AOA %d, near AOA %d, near range %d, field typing %d); "
                "on-lattice positions %d/%d; %.1f s",
                all_ok, n, far_ok, near_th, near_d, typed, lattice_ok, lattice_n, secs)};
}

// ---------------------------------------------------------------------------

Outcome grid_reduction() {
    const auto t0 = Clock::now();
    const Anchors a{{0.0, 0.0}, {20.0, 15.0}, {20.0, 20.0}};
    const double d_r = 30.0, b = 400e6;
    GridConfig gc; // 0.1 m, 0.1 deg, quarter facing the user, d_max 80 m
    const std::size_t full_near = full_near_size(gc, d_r);
    const std::size_t full_far = full_far_size(gc);
    rng::Stream rs(400);
    const int n = 1000;
    double near_sum = 0.0, far_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        // Area-uniform in the quarter disc of radius d_max.
        const double d = gc.max_range * std::sqrt(rs.uniform());
        const double th = rs.uniform(gc.theta_min, gc.theta_max);
        const int tap = tap_of_range(total_range_at(a, std::max(d, 1e-6), th), b);
        const SpectrumGrid g = build_grids(a, d_r, b, gc, tap);
        near_sum += static_cast<double>(g.near_size);
        far_sum += static_cast<double>(g.far.size());
    }
    const double near_mean = near_sum / n, far_mean = far_sum / n;
    const double near_red = 1.0 - near_mean / static_cast<double>(full_near);
    const double far_red = 1.0 - far_mean / static_cast<double>(full_far);
    const bool exact = full_near == 270000;
    const bool near_ok = std::abs(near_mean - 3858.0) <= 0.15 * 3858.0 && near_red >= 0.98;
    const bool far_ok = std::abs(far_red - 0.088) <= 0.03;
    const double secs = seconds_since(t0);
    return {exact && near_ok && far_ok && secs < 60.0,
            fmt("|R^N| = %zu; mean near grid %.0f (reduction %.2f%%); far reduction %.2f%% (target 8.8 +/- 3); %.1f s",
                full_near, near_mean, 100.0 * near_red, 100.0 * far_red, secs)};
}

// ---------------------------------------------------------------------------

Outcome range_formula() {
    int bad = 0;
    for (int l = 1; l <= 88; ++l) {
        const double want = (2.0 * l - 1.0) * 1.5;
        if (cluster_range(l, 1e8) != want) ++bad;
    }
    return {bad == 0, fmt("%d of 88 tap midpoints differ from (2l-1) x 1.5 m", bad)};
}

// ---------------------------------------------------------------------------

Outcome phase1_support() {
    const auto t0 = Clock::now();
    HarnessConfig c = preset("desk");
    c.ofdm.num_subcarriers = 256;
    c.ofdm.subcarrier_spacing = 1e8 / 256.0;
    c.ofdm.num_taps = 32;
    c.ofdm.cp_length = 32;
    c.snr_db = 20.0;
    c.clusters_per_trial = 3;
    // With 32 taps every total range must stay under 48 m, so the deployment
    // is shrunk: user-IRS 17 m, IRS-BS 5 m, targets within 12 m of the IRS.
    c.scene.user = {0.0, 0.0};
    c.scene.irs = {12.0, 12.0};
    c.scene.bs = {12.0, 7.0};
    c.scene.near_field_radius = 6.0;
    c.pipeline.grid.max_range = 12.0;
    const CMatrix e = delay_manifold(c.ofdm.num_subcarriers, c.ofdm.num_taps);
    int exact = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const SimulatedTrial sim = simulate_trial(c, rng::stream_seed(c.seed, rng::Tag::Trial, {9000u + trial}));
        GroupLassoConfig lc;
        lc.omega = default_omega(sim.ofdm, c.scene.bs_array.num_elements, 3.0);
        const CirEstimate est = group_lasso(sim.observations, sim.pilots, e, sim.ofdm.power, lc);
        const ClusterDetection det = detect_clusters(est, sim.ofdm.bandwidth());
        exact += det.taps == sim.clusters.occupied();
    }
    const double secs = seconds_since(t0);
    return {exact >= 95 && secs < 120.0, fmt("exact tap support in %d/100 trials, %.1f s", exact, secs)};
}

// ---------------------------------------------------------------------------

Outcome aic_order() {
    const auto t0 = Clock::now();
    const HarnessConfig c = preset("desk");
    const IrsBsChannel g = irs_bs_channel(c.scene, IrsBsModel::NearField);
    const int q0 = c.ofdm.virtual_symbols, m_b = c.scene.bs_array.num_elements, v = 512;
    const VirtualSteering vs(g, design_irs_schedule(g, q0), c.scene.irs_array, c.scene.wavelength);
    rng::Stream rs(15);
    int hits = 0;
    std::vector<int> per_k(5, 0);
    std::vector<double> weakest;
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 1 + trial % 4;
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i < k; ++i) {
            const auto [d, th] = draw_polar(rs, 2.0, c.pipeline.grid.max_range);
            pts.emplace_back(model_range(c.scene.field_of(point_from_polar(c.scene.irs, d, th)), d), th);
        }
        const CMatrix psi = vs.matrix(pts);
        CMatrix gamma(k, v);
        for (Eigen::Index i = 0; i < gamma.size(); ++i) gamma.data()[i] = rs.complex_normal();
        const CMatrix clean = psi * gamma;
        // 15 dB per-entry SNR of the noiseless snapshots.
        const double sigma2 = clean.squaredNorm() / static_cast<double>(clean.size()) / std::pow(10.0, 1.5);
        CMatrix x = clean;
        for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] += rs.complex_normal(sigma2);
        // Weakest signal eigenvalue of the clean covariance over the noise level.
        const RVector clean_ev = hermitian_eig(sample_covariance(clean)).values;
        weakest.push_back(clean_ev[k - 1] / sigma2);
        const Eigenpairs eig = hermitian_eig(sample_covariance(x));
        const int k_hat = estimate_target_count(eig.values, q0, m_b, v, c.pipeline.aic);
        if (k_hat == k) {
            ++hits;
            ++per_k[static_cast<std::size_t>(k)];
        }
    }
    const auto below = std::count_if(weakest.begin(), weakest.end(), [](double r) { return r < 1.0; });
    return {hits >= 95, fmt("K_hat = K in %d/100 (K=1..4: %d %d %d %d of 25); weakest signal eigenvalue under the "
                            "noise level in %d/100; %.1f s",
                            hits, per_k[1], per_k[2], per_k[3], per_k[4], static_cast<int>(below), seconds_since(t0))};
}

// ---------------------------------------------------------------------------

std::string prob(const std::optional<double>& p) { return p ? fmt("%.3f", *p) : std::string("undef"); }

Outcome end_to_end_desk() {
    const auto t0 = Clock::now();
    const HarnessConfig c = preset("desk"); // 200 trials, R_e = 1 m
    const ExperimentResult r = run_experiment(c);
    const MetricsReport& mu = r.metrics.front().music;
    const MetricsReport& so = r.metrics.front().somp;
    bool ok = true;
    std::string detail;
    for (FieldType f : {FieldType::Near, FieldType::Far}) {
        const auto a = mu.error_sum(f), b = so.error_sum(f);
        ok = ok && a && b && *a < *b;
        detail += fmt("%s: MUSIC %s vs S-OMP %s; ", to_string(f), prob(a).c_str(), prob(b).c_str());
    }
    const double secs = seconds_since(t0);
    detail += fmt("MUSIC md %s/%s fa %s/%s (near/far); %.0f s", prob(mu.p_md_near).c_str(), prob(mu.p_md_far).c_str(),
                  prob(mu.p_fa_near).c_str(), prob(mu.p_fa_far).c_str(), secs);
    return {ok && secs < 600.0, detail};
}

// ---------------------------------------------------------------------------

// Binomial standard error of a pooled probability estimate.
double std_error(double p, int n) { return n > 0 ? std::sqrt(std::max(p * (1.0 - p), 0.0) / n) : 1.0; }

struct Series {
    std::string name;
    std::vector<double> p;
    std::vector<int> n;
};

std::vector<Series> music_series(const std::vector<SweepPoint>& pts) {
    std::vector<Series> s{{"md_near", {}, {}}, {"md_far", {}, {}}, {"fa_near", {}, {}}, {"fa_far", {}, {}}};
    for (const auto& pt : pts) {
        const MetricsReport& m = pt.metrics.music;
        const EventCounts& e = m.totals;
        const std::optional<double> v[4] = {m.p_md_near, m.p_md_far, m.p_fa_near, m.p_fa_far};
        const int den[4] = {e.targets_near, e.targets_far, e.targets_near, e.targets_far};
        for (int i = 0; i < 4; ++i) {
            s[static_cast<std::size_t>(i)].p.push_back(v[i].value_or(std::nan("")));
            s[static_cast<std::size_t>(i)].n.push_back(den[i]);
        }
    }
    return s;
}

std::string series_text(const std::vector<double>& values, const std::vector<Series>& s) {
    std::ostringstream os;
    for (const auto& x : s) {
        os << x.name << " [";
        for (std::size_t i = 0; i < x.p.size(); ++i) os << (i ? " " : "") << fmt("%g:%.3f", values[i], x.p[i]);
        os << "] ";
    }
    return os.str();
}

// Every step may rise by at most two standard errors of the difference.
bool non_increasing(const Series& s) {
    for (std::size_t i = 1; i < s.p.size(); ++i) {
        if (std::isnan(s.p[i]) || std::isnan(s.p[i - 1])) return false;
        const double se = std::hypot(std_error(s.p[i], s.n[i]), std_error(s.p[i - 1], s.n[i - 1]));
        if (s.p[i] > s.p[i - 1] + 2.0 * se) return false;
    }
    return true;
}

bool flat(const Series& s, double half_width) {
    const double mean = std::accumulate(s.p.begin(), s.p.end(), 0.0) / static_cast<double>(s.p.size());
    return std::all_of(s.p.begin(), s.p.end(), [&](double v) { return std::abs(v - mean) <= half_width; });
}

Outcome trends() {
    const auto t0 = Clock::now();
    std::string detail;
    bool ok = true;

    // Near-field BS-IRS channel, Q0 = 1.
    {
        HarnessConfig c = preset("desk");
        c.ofdm.virtual_symbols = 1;
        c.ofdm.symbols_per_block = 1;
        c.assumed_targets = 3;
        const std::vector<double> mb{4, 8, 12, 16};
        const auto s = music_series(sweep(c, SweepAxis::BsAntennas, mb));
        bool part = true;
        for (const auto& x : s) part = part && non_increasing(x);
        ok = ok && part;
        detail += std::string("near-field M_B ") + (part ? "non-increasing" : "NOT non-increasing") + ": " +
                  series_text(mb, s) + "| ";
    }
    // Far-field BS-IRS channel, Q0 = 1.
    {
        HarnessConfig c = preset("desk");
        c.irs_bs_model = IrsBsModel::FarField;
        c.ofdm.virtual_symbols = 1;
        c.ofdm.symbols_per_block = 1;
        c.assumed_targets = 1;
        const std::vector<double> mb{2, 4, 8};
        const auto s = music_series(sweep(c, SweepAxis::BsAntennas, mb));
        bool part = true;
        for (const auto& x : s) part = part && flat(x, 0.02);
        ok = ok && part;
        detail += std::string("far-field M_B ") + (part ? "flat" : "NOT flat") + " within +/-0.02: " +
                  series_text(mb, s) + "| ";
    }
    // Q0 M_B = 12.
    {
        const HarnessConfig c = preset("desk");
        const std::vector<double> q0{1, 2, 3, 4, 6, 12};
        const auto s = music_series(sweep(c, SweepAxis::FixedProductQ0, q0, 12));
        bool part = true;
        for (const auto& x : s) part = part && non_increasing(x) && x.p.back() < x.p.front();
        ok = ok && part;
        detail += std::string("Q0 at Q0 M_B = 12 ") + (part ? "decreasing" : "NOT decreasing") + ": " +
                  series_text(q0, s);
    }
    detail += fmt("; %.0f s", seconds_since(t0));
    return {ok, detail};
}

// ---------------------------------------------------------------------------

Outcome solver_properties() {
    const auto t0 = Clock::now();
    std::string detail;
    bool ok = true;
    const HarnessConfig c = preset("desk");
    const Anchors a = c.scene.anchors();

    // Group LASSO on a simulated desk trial.
    {
        HarnessConfig hc = c;
        hc.snr_db = 20.0;
        const SimulatedTrial sim = simulate_trial(hc, 31);
        const CMatrix e = delay_manifold(sim.ofdm.num_subcarriers, sim.ofdm.num_taps);
        bool mono = true, cert = true;
        for (StepRule rule : {StepRule::Fixed, StepRule::Backtracking}) {
            GroupLassoConfig lc;
            lc.omega = default_omega(sim.ofdm, hc.scene.bs_array.num_elements, 3.0);
            lc.step_rule = rule;
            lc.keep_history = true;
            const CirEstimate est = group_lasso(sim.observations, sim.pilots, e, sim.ofdm.power, lc);
            for (std::size_t i = 1; i < est.history.size(); ++i)
                mono = mono && est.history[i] <= est.history[i - 1] + 1e-10 * std::abs(est.history[i - 1]);
            const OptimalityReport r =
                optimality_certificate(sim.observations, sim.pilots, e, sim.ofdm.power, est.taps, lc.omega);
            cert = cert && r.worst_zero_group <= 1.0 + lc.rel_tol && r.worst_active_group <= 1e-5 * lc.omega;
        }
        ok = ok && mono && cert;
        detail += fmt("lasso monotone %s, certificate %s; ", mono ? "yes" : "NO", cert ? "yes" : "NO");
    }
    // Near residual Jacobian against central differences.
    {
        rng::Stream rs(5);
        double worst = 0.0;
        const NearSolveConfig nc;
        for (int i = 0; i < 100; ++i) {
            const auto [d, th] = draw_polar(rs, 1.0, 60.0);
            const Point2 p = point_from_polar(a.irs, d, th);
            const double total = path_ranges(a, p).total() + rs.normal();
            const double th_hat = th + 0.01 * rs.normal(), d_hat = d + 0.3 * rs.normal();
            const NearResiduals r = near_residuals(a, p, total, th_hat, d_hat, nc);
            Eigen::Matrix<double, 3, 2> fd;
            const double h = 1e-6 * std::max(1.0, d);
            for (int k = 0; k < 2; ++k) {
                Point2 lo = p, hi = p;
                (k == 0 ? lo.x : lo.y) -= h;
                (k == 0 ? hi.x : hi.y) += h;
                fd.col(k) = (near_residuals(a, hi, total, th_hat, d_hat, nc).r -
                             near_residuals(a, lo, total, th_hat, d_hat, nc).r) /
                            (2.0 * h);
            }
            worst = std::max(worst, (fd - r.J).norm() / r.J.norm());
        }
        ok = ok && worst < 1e-5;
        detail += fmt("Jacobian rel err %.1e; ", worst);
    }
    // Far closed form on consistent inputs.
    {
        rng::Stream rs(6);
        double worst_obj = 0.0, worst_pos = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const auto [d, th] = draw_polar(rs, 1.0, 200.0);
            const Point2 p = point_from_polar(a.irs, d, th);
            const TargetEstimate est = localize_far(a, path_ranges(a, p).total(), th);
            worst_obj = std::max(worst_obj, est.objective);
            worst_pos = std::max(worst_pos, distance(est.pos, p));
        }
        ok = ok && worst_obj < 1e-9 && worst_pos < 1e-4;
        detail += fmt("far closed form max residual %.1e, max position error %.1e m; ", worst_obj, worst_pos);
    }
    // OFDM time/frequency equivalence.
    {
        OfdmConfig oc = c.ofdm;
        oc.noise_var = 0.0;
        const PilotGrid pilots = generate_pilots(oc, 8);
        SymbolBlockArray cirs(oc.symbols_per_block, 2, oc.num_taps, 3);
        rng::Stream rs(8);
        for (auto& m : cirs.raw())
            for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rs.complex_normal();
        OfdmConfig two = oc;
        two.num_blocks = 2;
        const PilotGrid p2 = generate_pilots(two, 8);
        const SymbolBlockArray f = simulate_freq_rx(two, p2, cirs, 1);
        const SymbolBlockArray t = simulate_time_rx(two, p2, cirs, 1);
        double worst = 0.0;
        for (int tt = 0; tt < 2; ++tt)
            for (int q = 0; q < two.symbols_per_block; ++q) {
                const CMatrix back = remove_cp_and_dft(two, t.at(q, tt));
                worst = std::max(worst, (back - f.at(q, tt)).norm() / f.at(q, tt).norm());
            }
        (void)pilots;
        ok = ok && worst < 1e-9;
        detail += fmt("time/frequency rel err %.1e; ", worst);
    }
    detail += fmt("%.1f s", seconds_since(t0));
    return {ok, detail};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {"virtual_rank", virtual_rank},   {"asymptotic_music", asymptotic_music},       {"grid_reduction", grid_reduction},
        {"range_formula", range_formula},   {"phase1_support", phase1_support}, {"aic_order", aic_order},
        {"end_to_end_desk", end_to_end_desk}, {"trends", trends},            {"solver_properties", solver_properties},
    };
    std::string only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = argv[++i];
        } else {
            std::fprintf(stderr, "usage: acceptance [--only NAME]\n");
            return 2;
        }
    }
    bool any = false, failed = false;
    for (const auto& c : all) {
        if (!only.empty() && only != c.name) continue;
        any = true;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
        std::fflush(stdout);
        failed = failed || !o.pass;
    }
    if (!any) {
        std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
        return 2;
    }
    return failed ? 1 : 0;
}

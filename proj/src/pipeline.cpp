// SPDX-License-Identifier: Apache-2.0

#include "irsloc/pipeline.hpp"

#include "irsloc/somp.hpp"

#include <stdexcept>

namespace irsloc {

ReceiverModel receiver_model(const Scene& scene, const IrsBsChannel& irs_bs, const IrsSchedule& schedule) {
    return {scene.anchors(), scene.wavelength, scene.near_field_radius, scene.irs_array, irs_bs, schedule};
}

std::optional<TargetEstimate> localize_detection(const ReceiverModel& rx, FieldType field, double d, double theta,
                                                 int tap, double bandwidth, const PipelineConfig& config) {
    const double total = cluster_range(tap, bandwidth);
    try {
        TargetEstimate est = field == FieldType::Near
                                 ? localize_near(rx.anchors, total, theta, d, config.near_solver)
                                 : localize_far(rx.anchors, total, theta, config.far_solver);
        est.tap = tap;
        return est;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

PeakSets finalize_peaks(const PeakSets& raw, const PipelineConfig& config, double near_field_radius) {
    return deduplicate(threshold_peaks(raw, config.far_threshold, config.near_threshold), config.grid,
                       near_field_radius, config.dedup);
}

ClusterOutcome analyze_cluster(const ReceiverModel& rx, const VirtualSteering& steering, const CMatrix& snapshots,
                               int tap, double bandwidth, const PipelineConfig& config) {
    ClusterOutcome out;
    out.tap = tap;
    out.range = cluster_range(tap, bandwidth);
    out.energy = snapshots.squaredNorm();

    const int q0 = steering.num_symbols();
    const int m_b = static_cast<int>(rx.irs_bs.G.rows());
    const Eigenpairs eig = hermitian_eig(sample_covariance(snapshots));
    out.eigenvalues = eig.values;
    out.k_hat = estimate_target_count(eig.values, q0, m_b, static_cast<int>(snapshots.cols()), config.aic);
    if (out.k_hat == 0) return out;

    const SpectrumGrid grid = build_grids(rx.anchors, rx.near_field_radius, bandwidth, config.grid, tap);
    out.near_grid = grid.near_size;
    out.far_grid = grid.far.size();
    if (grid.near_empty() && grid.far_empty()) {
        out.error = "empty search grid";
        return out;
    }

    const CMatrix noise = noise_subspace(eig, out.k_hat);
    const CMatrix near_dict = grid.near_empty() ? CMatrix() : near_dictionary(steering, grid);
    const CMatrix far_dict = grid.far_empty() ? CMatrix() : far_dictionary(steering, grid);
    Spectra spectra;
    if (!grid.near_empty()) spectra.near = music_values(near_dict, noise);
    if (!grid.far_empty()) spectra.far = music_values(far_dict, noise);

    out.raw_peaks = select_peaks(grid, spectra, out.k_hat, 0.0, 0.0);
    out.music_peaks = finalize_peaks(out.raw_peaks, config, rx.near_field_radius);
    if (config.run_somp) out.somp_atoms = somp(snapshots, near_dict, far_dict, grid, out.k_hat);
    if (config.keep_spectra) {
        out.grid = grid;
        out.spectra = std::move(spectra);
    }
    return out;
}

PipelineResult run_pipeline(const ReceiverModel& rx, const OfdmConfig& ofdm, const PilotGrid& pilots,
                            const SymbolBlockArray& observations, const PipelineConfig& config) {
    ofdm.validate();
    const double bandwidth = ofdm.bandwidth();
    const int m_b = static_cast<int>(rx.irs_bs.G.rows());
    PipelineResult res;

    GroupLassoConfig lasso = config.lasso;
    if (lasso.omega < 0.0) lasso.omega = default_omega(ofdm, m_b, config.omega_factor);
    res.omega = lasso.omega;
    const CMatrix e = delay_manifold(ofdm.num_subcarriers, ofdm.num_taps);
    res.cir = group_lasso(observations, pilots, e, ofdm.power, lasso);

    const double rho =
        config.rho >= 0.0 ? config.rho : default_cluster_threshold(res.cir.group_energy, config.rho_factor);
    res.detection = detect_clusters(res.cir, bandwidth, rho);

    const VirtualSteering steering(rx.irs_bs, rx.schedule, rx.irs_array, rx.wavelength);
    const int q0 = rx.schedule.num_symbols();
    for (int tap : res.detection.taps) {
        const CMatrix x = build_virtual(tap, res.cir.taps, q0);
        ClusterOutcome c = analyze_cluster(rx, steering, x, tap, bandwidth, config);
        for (const auto& peaks : {c.music_peaks.far, c.music_peaks.near})
            for (const Peak& p : peaks)
                if (auto est = localize_detection(rx, p.field, p.d, p.theta, tap, bandwidth, config))
                    res.music.push_back(*est);
        for (const SompAtom& a : c.somp_atoms)
            if (auto est = localize_detection(rx, a.field, a.d, a.theta, tap, bandwidth, config))
                res.somp.push_back(*est);
        res.clusters.push_back(std::move(c));
    }
    return res;
}

} // namespace irsloc

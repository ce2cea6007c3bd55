// SPDX-License-Identifier: Apache-2.0

#include "irsloc/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace irsloc {

std::string format_number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()), path_(path) {
    if (!out_) throw std::runtime_error("cannot write '" + path + "'");
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

CsvWriter& CsvWriter::cell(const std::string& s) {
    if (pending_ == columns_) throw std::logic_error(path_ + ": too many cells in row");
    if (s.find_first_of(",\"\n") != std::string::npos) throw std::invalid_argument(path_ + ": cell needs quoting");
    out_ << (pending_++ ? "," : "") << s;
    return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_number(v)); }
CsvWriter& CsvWriter::cell(int v) { return cell(std::to_string(v)); }
CsvWriter& CsvWriter::cell(std::size_t v) { return cell(std::to_string(v)); }
CsvWriter& CsvWriter::cell(const std::optional<double>& v) { return cell(v ? format_number(*v) : std::string()); }

void CsvWriter::end_row() {
    if (pending_ != columns_) throw std::logic_error(path_ + ": short row");
    out_ << '\n';
    pending_ = 0;
    if (!out_) throw std::runtime_error("write failed for '" + path_ + "'");
}

void write_estimates_csv(const std::string& path, const std::vector<TargetEstimate>& music,
                         const std::vector<TargetEstimate>& somp) {
    CsvWriter w(path, {"method", "field", "tap", "theta_rad", "d_m", "x_m", "y_m", "objective", "iterations",
                       "converged", "used_fallback"});
    for (const auto* set : {&music, &somp})
        for (const auto& e : *set) {
            w.cell(set == &music ? "music" : "somp").cell(to_string(e.field)).cell(e.tap).cell(e.theta).cell(e.d);
            w.cell(e.pos.x).cell(e.pos.y).cell(e.objective).cell(e.iterations);
            w.cell(e.converged ? 1 : 0).cell(e.used_fallback ? 1 : 0);
            w.end_row();
        }
}

void write_truth_csv(const std::string& path, const Scene& scene, double bandwidth) {
    CsvWriter w(path, {"index", "field", "x_m", "y_m", "d_m", "theta_rad", "total_range_m", "tap"});
    for (std::size_t k = 0; k < scene.targets.size(); ++k) {
        const auto& t = scene.targets[k];
        const double total = path_ranges(scene, k).total();
        w.cell(k).cell(to_string(t.field)).cell(t.pos.x).cell(t.pos.y).cell(distance_to_irs(scene, k));
        w.cell(aoa_to_irs(scene, k)).cell(total).cell(tap_of_range(total, bandwidth));
        w.end_row();
    }
}

void write_near_spectrum_csv(const std::string& path, const SpectrumGrid& grid, const RVector& values) {
    if (static_cast<std::size_t>(values.size()) != grid.near_size)
        throw std::invalid_argument("write_near_spectrum_csv: spectrum does not match the grid");
    CsvWriter w(path, {"d_m", "theta_rad", "value"});
    for (std::size_t i = 0; i < grid.near_size; ++i) {
        const auto [d, theta] = grid.near_point(i);
        w.cell(d).cell(theta).cell(values[static_cast<Eigen::Index>(i)]);
        w.end_row();
    }
}

void write_far_spectrum_csv(const std::string& path, const SpectrumGrid& grid, const RVector& values) {
    if (static_cast<std::size_t>(values.size()) != grid.far.size())
        throw std::invalid_argument("write_far_spectrum_csv: spectrum does not match the grid");
    CsvWriter w(path, {"theta_rad", "value"});
    for (std::size_t i = 0; i < grid.far.size(); ++i) {
        w.cell(grid.config.theta(grid.far[i])).cell(values[static_cast<Eigen::Index>(i)]);
        w.end_row();
    }
}

namespace {

const std::vector<std::string> kMetricColumns = {
    "p_md_near", "p_md_far", "p_fa_near", "p_fa_far", "targets_near", "targets_far", "md_near", "md_far",
    "fa_near",   "fa_far",   "estimates_near", "estimates_far"};

void metric_cells(CsvWriter& w, const MetricsReport& m) {
    const EventCounts& s = m.totals;
    w.cell(m.p_md_near).cell(m.p_md_far).cell(m.p_fa_near).cell(m.p_fa_far);
    w.cell(s.targets_near).cell(s.targets_far).cell(s.md_near).cell(s.md_far).cell(s.fa_near).cell(s.fa_far);
    w.cell(s.estimates_near).cell(s.estimates_far);
}

std::vector<std::string> with_metrics(std::vector<std::string> head, const std::vector<std::string>& tail = {}) {
    head.insert(head.end(), kMetricColumns.begin(), kMetricColumns.end());
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
}

} // namespace

void write_metrics_csv(const std::string& path, const std::vector<RadiusMetrics>& metrics) {
    CsvWriter w(path, with_metrics({"method", "radius_m", "trials"}));
    for (const auto& rm : metrics)
        for (const auto* m : {&rm.music, &rm.somp}) {
            w.cell(m == &rm.music ? "music" : "somp").cell(rm.radius).cell(m->trials);
            metric_cells(w, *m);
            w.end_row();
        }
}

void write_sweep_csv(const std::string& path, SweepAxis axis, const std::vector<SweepPoint>& points) {
    CsvWriter w(path, with_metrics({"axis", "value", "method", "radius_m", "trials"},
                                   {"far_threshold", "near_threshold", "wall_s"}));
    for (const auto& p : points)
        for (const auto* m : {&p.metrics.music, &p.metrics.somp}) {
            w.cell(to_string(axis)).cell(p.value).cell(m == &p.metrics.music ? "music" : "somp");
            w.cell(p.metrics.radius).cell(m->trials);
            metric_cells(w, *m);
            w.cell(p.thresholds.far).cell(p.thresholds.near).cell(p.seconds);
            w.end_row();
        }
}

void write_events_csv(const std::string& path, const HarnessConfig& config, const std::vector<TrialRecord>& trials,
                      const Thresholds& thresholds, double radius) {
    CsvWriter w(path, {"trial", "method", "targets_near", "targets_far", "md_near", "md_far", "fa_near", "fa_far",
                       "estimates_near", "estimates_far", "wall_s"});
    for (const auto& t : trials) {
        const EventCounts mu = classify_events(t.truth, music_estimates(config, t, thresholds), radius);
        const EventCounts so = classify_events(t.truth, t.somp, radius);
        for (const auto* e : {&mu, &so}) {
            w.cell(t.index).cell(e == &mu ? "music" : "somp");
            w.cell(e->targets_near).cell(e->targets_far).cell(e->md_near).cell(e->md_far);
            w.cell(e->fa_near).cell(e->fa_far).cell(e->estimates_near).cell(e->estimates_far).cell(t.seconds);
            w.end_row();
        }
    }
}

} // namespace irsloc

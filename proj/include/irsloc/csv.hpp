// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/harness.hpp"

#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace irsloc {

// Minimal CSV emitter. Numbers use the shortest round-trip form and an
// undefined probability is an empty cell.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    CsvWriter& cell(const std::string& s);
    CsvWriter& cell(const char* s) { return cell(std::string(s)); }
    CsvWriter& cell(double v);
    CsvWriter& cell(int v);
    CsvWriter& cell(std::size_t v);
    CsvWriter& cell(const std::optional<double>& v);
    void end_row();

private:
    std::ofstream out_;
    std::size_t columns_;
    std::size_t pending_ = 0;
    std::string path_;
};

std::string format_number(double v);

// Column orders are fixed; see README for the schemas.
void write_estimates_csv(const std::string& path, const std::vector<TargetEstimate>& music,
                         const std::vector<TargetEstimate>& somp);
void write_truth_csv(const std::string& path, const Scene& scene, double bandwidth);
void write_near_spectrum_csv(const std::string& path, const SpectrumGrid& grid, const RVector& values);
void write_far_spectrum_csv(const std::string& path, const SpectrumGrid& grid, const RVector& values);
void write_metrics_csv(const std::string& path, const std::vector<RadiusMetrics>& metrics);
void write_sweep_csv(const std::string& path, SweepAxis axis, const std::vector<SweepPoint>& points);
void write_events_csv(const std::string& path, const HarnessConfig& config, const std::vector<TrialRecord>& trials,
                      const Thresholds& thresholds, double radius);

} // namespace irsloc

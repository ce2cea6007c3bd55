// SPDX-License-Identifier: Apache-2.0
//
// irsloc: simulate, run, sweep, report.

#include "irsloc/config_io.hpp"
#include "irsloc/csv.hpp"
#include "irsloc/harness.hpp"
#include "irsloc/rng.hpp"
#include "irsloc/tensor_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace irsloc;

namespace {

struct Common {
    std::string config_path;
    std::string preset;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "JSON config file (a manifest.json is accepted too)");
    cmd->add_option("--preset", c.preset, "base preset: desk or full");
    cmd->add_option("--out", c.out_dir, "output directory");
    cmd->add_option("--override", c.overrides, "KEY=VALUE with a dotted key, repeatable")->take_all();
    cmd->add_option_function<std::uint64_t>(
        "--seed",
        [&c](std::uint64_t s) {
            c.seed = s;
            c.seed_given = true;
        },
        "base seed");
}

// A manifest carries its resolved config under "config"; unwrap it so the
// file can be fed back with --config.
std::string unwrap_manifest(const std::string& path, const fs::path& scratch) {
    const Json j = read_json_file(path);
    if (!j.contains("config")) return path;
    std::ofstream(scratch) << j.at("config").dump(2);
    return scratch.string();
}

std::pair<HarnessConfig, Json> resolve(const Common& c) {
    fs::create_directories(c.out_dir);
    ConfigSources src;
    if (!c.preset.empty()) src.preset = c.preset;
    if (!c.config_path.empty()) src.path = unwrap_manifest(c.config_path, fs::path(c.out_dir) / ".resolved_input.json");
    src.overrides = c.overrides;
    if (c.seed_given) src.seed = c.seed;
    auto r = resolve_config(src);
    std::error_code ec;
    fs::remove(fs::path(c.out_dir) / ".resolved_input.json", ec);
    return r;
}

void write_manifest(const Common& c, const std::string& command, const Json& config, const Json& extra,
                    const std::vector<std::string>& outputs) {
    Json m;
    m["artifact"] = "irsloc";
    m["version"] = kArtifactVersion;
    m["command"] = command;
    m["preset"] = c.preset.empty() ? "desk" : c.preset;
    m["seed"] = config.at("harness").at("seed");
    m["config"] = config;
    for (const auto& [k, v] : extra.items()) m[k] = v;
    m["outputs"] = outputs;
    std::ofstream(fs::path(c.out_dir) / "manifest.json") << m.dump(2) << '\n';
}

std::string out(const Common& c, const std::string& name) { return (fs::path(c.out_dir) / name).string(); }

std::uint64_t trial_seed(const HarnessConfig& cfg) { return rng::stream_seed(cfg.seed, rng::Tag::Trial, {0}); }

// Single-trial observations, pilots and ground truth.
void cmd_simulate(const Common& c) {
    auto [cfg, json] = resolve(c);
    const SimulatedTrial sim = simulate_trial(cfg, trial_seed(cfg));
    write_tensor(out(c, "observations.bin"), sim.observations);
    SymbolBlockArray pilots(sim.pilots.num_symbols, sim.pilots.num_blocks, sim.pilots.num_subcarriers, 1);
    for (int t = 0; t < sim.pilots.num_blocks; ++t)
        for (int q = 0; q < sim.pilots.num_symbols; ++q) pilots.at(q, t) = sim.pilots.at(q, t);
    write_tensor(out(c, "pilots.bin"), pilots);
    write_truth_csv(out(c, "truth.csv"), sim.scene, sim.ofdm.bandwidth());
    Json extra;
    extra["noise_var"] = sim.ofdm.noise_var;
    write_manifest(c, "simulate", json, extra, {"observations.bin", "pilots.bin", "truth.csv"});
}

// One trial through all three phases, with spectra.
void cmd_run(const Common& c) {
    auto [cfg, json] = resolve(c);
    HarnessConfig resolved = cfg;
    resolved.ofdm.noise_var = noise_variance_for_snr(cfg);
    resolved.noise_from_snr = false;
    const Thresholds th = calibrate_thresholds(resolved);
    resolved.pipeline.far_threshold = th.far;
    resolved.pipeline.near_threshold = th.near;

    const SimulatedTrial sim = simulate_trial(resolved, trial_seed(resolved));
    const PipelineResult res = run_receiver(resolved, sim, true);

    std::vector<std::string> outputs{"estimates.csv", "truth.csv", "metrics.csv"};
    write_estimates_csv(out(c, "estimates.csv"), res.music, res.somp);
    write_truth_csv(out(c, "truth.csv"), sim.scene, sim.ofdm.bandwidth());
    for (const auto& cl : res.clusters) {
        if (!cl.grid || !cl.spectra) continue;
        const std::string stem = "spectrum_tap" + std::to_string(cl.tap);
        write_near_spectrum_csv(out(c, stem + "_near.csv"), *cl.grid, cl.spectra->near);
        write_far_spectrum_csv(out(c, stem + "_far.csv"), *cl.grid, cl.spectra->far);
        outputs.push_back(stem + "_near.csv");
        outputs.push_back(stem + "_far.csv");
    }
    std::vector<RadiusMetrics> metrics;
    for (double r : resolved.detection_radii)
        metrics.push_back({r, aggregate({classify_events(sim.scene.targets, res.music, r)}),
                           aggregate({classify_events(sim.scene.targets, res.somp, r)})});
    write_metrics_csv(out(c, "metrics.csv"), metrics);

    Json extra;
    extra["thresholds"] = {{"far", th.far}, {"near", th.near}};
    extra["omega"] = res.omega;
    for (const auto& cl : res.clusters)
        if (!cl.error.empty()) extra["cluster_errors"][std::to_string(cl.tap)] = cl.error;
    write_manifest(c, "run", json, extra, outputs);
    std::cout << res.music.size() << " MUSIC and " << res.somp.size() << " S-OMP estimates for "
              << sim.scene.targets.size() << " targets\n";
}

// Monte Carlo metrics over num_trials.
void cmd_report(const Common& c, bool events) {
    auto [cfg, json] = resolve(c);
    const ExperimentResult r = run_experiment(cfg);
    write_metrics_csv(out(c, "metrics.csv"), r.metrics);
    std::vector<std::string> outputs{"metrics.csv"};
    if (events) {
        HarnessConfig resolved = cfg;
        resolved.ofdm.noise_var = noise_variance_for_snr(cfg);
        write_events_csv(out(c, "events.csv"), resolved, r.trials, r.thresholds, cfg.detection_radii.front());
        outputs.push_back("events.csv");
    }
    Json extra;
    extra["thresholds"] = {{"far", r.thresholds.far}, {"near", r.thresholds.near}};
    extra["wall_s"] = r.seconds;
    write_manifest(c, "report", json, extra, outputs);
    for (const auto& m : r.metrics) {
        auto f = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("undefined"); };
        std::cout << "R_e " << m.radius << " m  MUSIC md_near " << f(m.music.p_md_near) << " md_far "
                  << f(m.music.p_md_far) << " fa_near " << f(m.music.p_fa_near) << " fa_far " << f(m.music.p_fa_far)
                  << " | S-OMP md_near " << f(m.somp.p_md_near) << " md_far " << f(m.somp.p_md_far) << " fa_near "
                  << f(m.somp.p_fa_near) << " fa_far " << f(m.somp.p_fa_far) << '\n';
    }
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw ConfigError("bad sweep value '" + item + "'");
        v.push_back(x);
    }
    if (v.empty()) throw ConfigError("--values needs at least one value");
    return v;
}

void cmd_sweep(const Common& c, const std::string& axis_name, const std::string& values, int product) {
    SweepAxis axis;
    try {
        axis = parse_sweep_axis(axis_name);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const std::vector<double> v = parse_values(values);
    auto [cfg, json] = resolve(c);
    std::vector<SweepPoint> points;
    try {
        points = sweep(cfg, axis, v, product);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    write_sweep_csv(out(c, "sweep.csv"), axis, points);
    Json extra;
    extra["axis"] = to_string(axis);
    extra["values"] = v;
    extra["fixed_product"] = product;
    write_manifest(c, "sweep", json, extra, {"sweep.csv"});
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"IRS-assisted bi-static localisation simulator"};
    app.require_subcommand(1);
    Common common;

    auto* simulate = app.add_subcommand("simulate", "write received-signal tensors and ground truth for one trial");
    add_common(simulate, common);
    auto* run = app.add_subcommand("run", "run one trial through all phases; estimates, spectra and metrics");
    add_common(run, common);
    auto* report = app.add_subcommand("report", "Monte Carlo missed-detection / false-alarm metrics");
    add_common(report, common);
    bool events = false;
    report->add_flag("--events", events, "also write the per-trial event log");
    auto* sw = app.add_subcommand("sweep", "metrics along one parameter axis");
    add_common(sw, common);
    std::string axis, values;
    int product = 12;
    sw->add_option("--axis", axis, "M_B, Q0, K, R_e, bandwidth, snr or Q0_fixed_product")->required();
    sw->add_option("--values", values, "comma-separated values")->required();
    sw->add_option("--product", product, "Q0 M_B for the Q0_fixed_product axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*simulate) cmd_simulate(common);
        else if (*run) cmd_run(common);
        else if (*report) cmd_report(common, events);
        else if (*sw) cmd_sweep(common, axis, values, product);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

// SPDX-License-Identifier: Apache-2.0

#include "irsloc/config_io.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace irsloc {

namespace {

constexpr double kDeg = kPi / 180.0;

// One configuration key: how to write it out and how to read it back.
struct Field {
    std::function<Json(const HarnessConfig&)> get;
    std::function<void(HarnessConfig&, const Json&)> set;
};

using Section = std::vector<std::pair<std::string, Field>>;

template <class T, class Ref>
Field plain(Ref ref) {
    return {[ref](const HarnessConfig& c) { return Json(ref(const_cast<HarnessConfig&>(c))); },
            [ref](HarnessConfig& c, const Json& j) { ref(c) = j.get<T>(); }};
}

template <class Ref>
Field degrees(Ref ref) {
    return {[ref](const HarnessConfig& c) { return Json(ref(const_cast<HarnessConfig&>(c)) / kDeg); },
            [ref](HarnessConfig& c, const Json& j) { ref(c) = j.get<double>() * kDeg; }};
}

template <class Ref>
Field point(Ref ref) {
    return {[ref](const HarnessConfig& c) {
                const Point2 p = ref(const_cast<HarnessConfig&>(c));
                return Json::array({p.x, p.y});
            },
            [ref](HarnessConfig& c, const Json& j) {
                if (!j.is_array() || j.size() != 2) throw ConfigError("expected [x, y]");
                ref(c) = {j.at(0).get<double>(), j.at(1).get<double>()};
            }};
}

template <class E>
Field enumerated(std::function<E&(HarnessConfig&)> ref, std::vector<std::pair<E, std::string>> names) {
    return {[ref, names](const HarnessConfig& c) {
                const E v = ref(const_cast<HarnessConfig&>(c));
                for (const auto& [e, n] : names)
                    if (e == v) return Json(n);
                return Json(nullptr);
            },
            [ref, names](HarnessConfig& c, const Json& j) {
                const std::string s = j.get<std::string>();
                for (const auto& [e, n] : names)
                    if (n == s) {
                        ref(c) = e;
                        return;
                    }
                std::string allowed;
                for (const auto& [e, n] : names) allowed += (allowed.empty() ? "" : ", ") + n;
                throw ConfigError("unknown value '" + s + "' (expected one of: " + allowed + ")");
            }};
}

#define REF(expr) [](HarnessConfig & c) -> auto& { return c.expr; }

const std::map<std::string, Section>& schema() {
    static const std::map<std::string, Section> s = {
        {"scene",
         {
             {"user", point(REF(scene.user))},
             {"bs", point(REF(scene.bs))},
             {"irs", point(REF(scene.irs))},
             {"wavelength", plain<double>(REF(scene.wavelength))},
             {"near_field_radius", plain<double>(REF(scene.near_field_radius))},
             {"irs_elements", plain<int>(REF(scene.irs_array.num_elements))},
             {"irs_spacing", plain<double>(REF(scene.irs_array.spacing))},
             {"bs_elements", plain<int>(REF(scene.bs_array.num_elements))},
             {"bs_spacing", plain<double>(REF(scene.bs_array.spacing))},
             {"irs_bs_model", enumerated<IrsBsModel>(REF(irs_bs_model), {{IrsBsModel::NearField, "near"},
                                                                         {IrsBsModel::FarField, "far"}})},
             {"irs_bs_pathloss", plain<double>(REF(irs_bs_pathloss))},
             {"target_pathloss", plain<double>(REF(target_pathloss))},
             {"synthesis_model", enumerated<SteeringModel>(REF(synthesis_model), {{SteeringModel::Fresnel, "fresnel"},
                                                                                  {SteeringModel::Exact, "exact"}})},
             {"targets",
              {[](const HarnessConfig& c) {
                   if (!c.fixed_targets) return Json(nullptr);
                   Json a = Json::array();
                   for (const Point2& p : *c.fixed_targets) a.push_back({p.x, p.y});
                   return a;
               },
               [](HarnessConfig& c, const Json& j) {
                   if (j.is_null()) {
                       c.fixed_targets.reset();
                       return;
                   }
                   if (!j.is_array()) throw ConfigError("expected null or a list of [x, y]");
                   std::vector<Point2> pts;
                   for (const auto& e : j) {
                       if (!e.is_array() || e.size() != 2) throw ConfigError("expected [x, y]");
                       pts.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
                   }
                   c.fixed_targets = std::move(pts);
               }}},
         }},
        {"ofdm",
         {
             {"num_subcarriers", plain<int>(REF(ofdm.num_subcarriers))},
             {"bandwidth",
              {[](const HarnessConfig& c) { return Json(c.ofdm.bandwidth()); },
               [](HarnessConfig& c, const Json& j) {
                   // from_json defers this key until num_subcarriers is known.
                   c.ofdm.subcarrier_spacing = j.get<double>() / c.ofdm.num_subcarriers;
               }}},
             {"cp_length", plain<int>(REF(ofdm.cp_length))},
             {"num_taps", plain<int>(REF(ofdm.num_taps))},
             {"symbols_per_block", plain<int>(REF(ofdm.symbols_per_block))},
             {"num_blocks", plain<int>(REF(ofdm.num_blocks))},
             {"power", plain<double>(REF(ofdm.power))},
             {"noise_var", plain<double>(REF(ofdm.noise_var))},
             {"snr_db", plain<double>(REF(snr_db))},
             {"noise_from_snr", plain<bool>(REF(noise_from_snr))},
         }},
        {"lasso",
         {
             {"omega", plain<double>(REF(pipeline.lasso.omega))},
             {"omega_factor", plain<double>(REF(pipeline.omega_factor))},
             {"max_iters", plain<int>(REF(pipeline.lasso.max_iters))},
             {"rel_tol", plain<double>(REF(pipeline.lasso.rel_tol))},
             {"step_rule", enumerated<StepRule>(REF(pipeline.lasso.step_rule), {{StepRule::Fixed, "fixed"},
                                                                                {StepRule::Backtracking, "backtracking"}})},
             {"rho", plain<double>(REF(pipeline.rho))},
             {"rho_factor", plain<double>(REF(pipeline.rho_factor))},
         }},
        {"subspace",
         {
             {"q0", plain<int>(REF(ofdm.virtual_symbols))},
             {"twist", plain<double>(REF(twist))},
             {"aic", enumerated<AicForm>(REF(pipeline.aic), {{AicForm::WaxKailath, "wax_kailath"},
                                                             {AicForm::Printed, "printed"}})},
             {"assumed_targets", plain<int>(REF(assumed_targets))},
             {"delta_d", plain<double>(REF(pipeline.grid.delta_d))},
             {"delta_theta_deg", degrees(REF(pipeline.grid.delta_theta))},
             {"theta_min_deg", degrees(REF(pipeline.grid.theta_min))},
             {"theta_max_deg", degrees(REF(pipeline.grid.theta_max))},
             {"max_range", plain<double>(REF(pipeline.grid.max_range))},
             {"window_margin", plain<double>(REF(pipeline.grid.window_margin))},
             {"threshold_policy",
              enumerated<ThresholdPolicy>(REF(threshold_policy), {{ThresholdPolicy::Fixed, "fixed"},
                                                                   {ThresholdPolicy::NoiseQuantile, "noise_quantile"},
                                                                   {ThresholdPolicy::Balanced, "balanced"}})},
             {"far_threshold", plain<double>(REF(pipeline.far_threshold))},
             {"near_threshold", plain<double>(REF(pipeline.near_threshold))},
             {"threshold_quantile", plain<double>(REF(threshold_quantile))},
             {"calibration_trials", plain<int>(REF(calibration_trials))},
             {"dedup", enumerated<DedupRule>(REF(pipeline.dedup), {{DedupRule::None, "none"},
                                                                   {DedupRule::KeepNear, "keep_near"},
                                                                   {DedupRule::KeepFar, "keep_far"}})},
         }},
        {"localize",
         {
             {"far_weight", plain<double>(REF(pipeline.far_solver.weight))},
             {"far_fallback_tol", plain<double>(REF(pipeline.far_solver.fallback_tol))},
             {"near_weight_angle", plain<double>(REF(pipeline.near_solver.weight_angle))},
             {"near_weight_ellipse", plain<double>(REF(pipeline.near_solver.weight_ellipse))},
             {"near_max_iters", plain<int>(REF(pipeline.near_solver.max_iters))},
             {"near_grad_tol", plain<double>(REF(pipeline.near_solver.grad_tol))},
             {"near_initial_damping", plain<double>(REF(pipeline.near_solver.initial_damping))},
             {"near_min_irs_distance", plain<double>(REF(pipeline.near_solver.min_irs_distance))},
         }},
        {"harness",
         {
             {"seed", plain<std::uint64_t>(REF(seed))},
             {"num_trials", plain<int>(REF(num_trials))},
             {"clusters_per_trial", plain<int>(REF(clusters_per_trial))},
             {"targets_per_cluster", plain<int>(REF(targets_per_cluster))},
             {"near_probability", plain<double>(REF(near_probability))},
             {"min_target_range", plain<double>(REF(min_target_range))},
             {"retry_budget", plain<int>(REF(retry_budget))},
             {"detection_radii", plain<std::vector<double>>(REF(detection_radii))},
             {"workers", plain<int>(REF(workers))},
         }},
    };
    return s;
}

#undef REF

} // namespace

Json to_json(const HarnessConfig& c) {
    Json j = Json::object();
    for (const auto& [section, fields] : schema())
        for (const auto& [key, f] : fields) j[section][key] = f.get(c);
    return j;
}

HarnessConfig from_json(const Json& j, const HarnessConfig& base) {
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    HarnessConfig c = base;
    std::optional<double> bandwidth;
    for (const auto& [section, body] : j.items()) {
        const auto it = schema().find(section);
        if (it == schema().end()) throw ConfigError("unknown configuration section '" + section + "'");
        if (!body.is_object()) throw ConfigError("section '" + section + "' must be an object");
        for (const auto& [key, value] : body.items()) {
            const std::string name = section + "." + key;
            const auto f = std::find_if(it->second.begin(), it->second.end(),
                                        [&](const auto& e) { return e.first == key; });
            if (f == it->second.end()) throw ConfigError("unknown configuration key '" + name + "'");
            if (name == "ofdm.bandwidth") {
                if (!value.is_number()) throw ConfigError(name + ": expected a number");
                bandwidth = value.get<double>();
                continue;
            }
            try {
                f->second.set(c, value);
            } catch (const ConfigError& e) {
                throw ConfigError(name + ": " + e.what());
            } catch (const Json::exception& e) {
                throw ConfigError(name + ": " + e.what());
            }
        }
    }
    if (bandwidth) c.ofdm.subcarrier_spacing = *bandwidth / c.ofdm.num_subcarriers;
    // Pilot symbols per block must cover one schedule period.
    c.ofdm.symbols_per_block = std::max(c.ofdm.symbols_per_block, c.ofdm.virtual_symbols);
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

void apply_override(Json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not KEY=VALUE");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    Json* node = &j;
    std::stringstream path(key);
    std::string part;
    while (std::getline(path, part, '.')) {
        if (!node->is_object() || !node->contains(part)) throw ConfigError("unknown configuration key '" + key + "'");
        node = &(*node)[part];
    }
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    *node = std::move(value);
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    Json j = Json::parse(in, nullptr, false, true);
    if (j.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");
    return j;
}

std::pair<HarnessConfig, Json> resolve_config(const ConfigSources& src) {
    HarnessConfig base;
    try {
        base = preset(src.preset.value_or("desk"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    Json j = to_json(base);
    if (src.path) {
        const Json file = read_json_file(*src.path);
        if (!file.is_object()) throw ConfigError("config file must hold a JSON object");
        for (const auto& [section, body] : file.items()) {
            if (!j.contains(section)) throw ConfigError("unknown configuration section '" + section + "'");
            if (!body.is_object()) throw ConfigError("section '" + section + "' must be an object");
            for (const auto& [key, value] : body.items()) {
                if (!j[section].contains(key))
                    throw ConfigError("unknown configuration key '" + section + "." + key + "'");
                j[section][key] = value;
            }
        }
    }
    for (const auto& o : src.overrides) apply_override(j, o);
    if (src.seed) j["harness"]["seed"] = *src.seed;
    HarnessConfig c = from_json(j, base);
    return {c, to_json(c)};
}

} // namespace irsloc

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/harness.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace irsloc {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Anything wrong with the configuration itself: unknown keys, bad types,
// values that fail a module precondition.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

/// Nested sections scene, ofdm, lasso, subspace, localize, harness. Angles are
/// written in degrees under *_deg keys.
Json to_json(const HarnessConfig& config);

/// Reads every key of `j` on top of `base`. Unknown keys and type mismatches
/// throw ConfigError; so does a configuration that fails validate().
HarnessConfig from_json(const Json& j, const HarnessConfig& base);

/// "a.b.c=value". The value is parsed as JSON when possible and taken as a
/// bare string otherwise. The key must already exist in `j`.
void apply_override(Json& j, const std::string& assignment);

Json read_json_file(const std::string& path);

struct ConfigSources {
    std::optional<std::string> preset; // default "desk"
    std::optional<std::string> path;   // merged over the preset
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
};

/// Preset, then file, then overrides, then --seed; returns the validated
/// configuration together with its fully resolved JSON form.
std::pair<HarnessConfig, Json> resolve_config(const ConfigSources& sources);

} // namespace irsloc

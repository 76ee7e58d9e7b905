#ifndef RWALK_CONFIG_HPP
#define RWALK_CONFIG_HPP

// JSON configuration for the CLI.  Parsing is strict: unknown keys and
// wrong value kinds are reported with their full path so a typo cannot
// silently fall back to a default.

#include <string>

#include "json.hpp"
#include "rwalk/ensemble.hpp"
#include "rwalk/grid.hpp"
#include "rwalk/model.hpp"
#include "rwalk/urn.hpp"

namespace rwalk {

struct RunConfig {
    ModelParams params;
    RecordingGrid grid = GeometricGrid{};
    EnsembleOptions options;
};

// Throws std::invalid_argument naming the offending key on any schema or
// model-invariant violation.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// Every field explicit, defaults included; feeding the output back through
// config_from_json reproduces the same configuration.
nlohmann::json config_to_json(const RunConfig& config);

// FNV-1a hash of the canonical (sorted-key, explicit-default) dump.
std::string config_digest(const RunConfig& config);

UrnSpec urn_from_json(const nlohmann::json& j);
UrnSpec load_urn_spec(const std::string& path);
nlohmann::json urn_to_json(const UrnSpec& spec);

}  // namespace rwalk

#endif

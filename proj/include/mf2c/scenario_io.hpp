#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "mf2c/recommender.hpp"
#include "mf2c/topology.hpp"
#include "mf2c/workload.hpp"

namespace mf2c {

using Json = nlohmann::ordered_json;

// All readers throw Error(InvalidConfig) on malformed documents. Missing
// optional keys keep their defaults. The layout is described in
// docs/scenario_schema.md.

Json to_json(const TerminalMap& map);
TerminalMap terminal_map_from_json(const Json& j);

Json to_json(const ScenarioParams& params);
/// A params object; "map" is optional and defaults to the built-in terminal.
ScenarioParams scenario_params_from_json(const Json& j);

/// Full expanded scenario, for inspection and determinism checks.
Json to_json(const Scenario& scenario);
Scenario scenario_from_json(const Json& j);

Json to_json(const TopologySpec& spec);
TopologySpec topology_spec_from_json(const Json& j);

Json to_json(const UserProfile& profile);
UserProfile user_profile_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
/// Writes `j` indented by two spaces with a trailing newline. Throws IoError.
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace mf2c

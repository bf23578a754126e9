#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "see/trainer/config.hpp"

namespace see::cli {

/// A run config plus a human-readable note for every value that was derived
/// rather than given (tau conversions, exploration batch split).
struct ResolvedConfig {
  trainer::RunConfig run;
  std::vector<std::string> derivations;
};

/// Config documents are JSON objects. "algorithm" and "env" select the tuned
/// defaults; every other RunConfig field may be overridden by name. Target
/// rates are given per network either as "tau_per_update" or as
/// "tau_per_timestep" (prefix "explore_" for the exploration network), never
/// both. "explore_transition_batch" may be omitted when "value_function_batch"
/// is given; it is then batch_size / value_function_batch. Keys starting with
/// '_' are ignored; any other unknown key is a ConfigError.
ResolvedConfig resolve_config(const nlohmann::json& doc);
ResolvedConfig load_config(const std::filesystem::path& path);

/// Canonical fully resolved form (direct per-update tau, explicit batches).
/// resolve_config(to_json(c)).run == c.
nlohmann::json to_json(const trainer::RunConfig& config);

bool same_config(const trainer::RunConfig& a, const trainer::RunConfig& b);

}  // namespace see::cli

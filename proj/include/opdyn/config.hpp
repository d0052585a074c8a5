#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "opdyn/core.hpp"

namespace opdyn {

/// One experiment: a parameter point, optional sweep axes over named scalar
/// parameters, a ranking regime, and run bookkeeping.
struct ExperimentConfig {
  ModelParams params;
  GroupConfig group;
  std::string regime = "popularity";  // popularity | random | personalized
  std::vector<std::pair<std::string, std::vector<double>>> sweep;
  std::vector<std::string> metrics = {"P"};
  int reps = 1;
  std::uint64_t seed = 1;
};

/// Set a named scalar on the parameter blocks; returns false for unknown keys.
bool apply_scalar(ModelParams& params, GroupConfig& group, const std::string& key, double value);

/// Load from a .json file or a flat key=value file (sweep axes spelled
/// sweep.<name> = v1,v2,...).
ExperimentConfig load_config(const std::string& path);

/// Exhaustive list of config problems; empty means valid.
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

std::string params_to_json(const ModelParams& params);
std::string config_to_json(const ExperimentConfig& cfg);

}  // namespace opdyn

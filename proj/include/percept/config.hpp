#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "percept/explore.hpp"
#include "percept/sim.hpp"

namespace percept {

/// Flat view of every tunable the pipeline reads, mirroring the key = value
/// config file. Defaults are the reference experiment's constants.
struct RunConfig {
  double side{10.0};
  double body_radius{0.25};
  double wheel_separation{0.4};
  double max_speed{2.0};
  double dt{0.05};
  double action_duration{5.0};
  double stuck_threshold{0.01};
  double tolerance{0.1};
  double max_range{15.0};
  std::uint64_t seed{0};
  std::uint64_t n_actions{0};
  bool noise{false};
  int resolution{50};
  std::uint64_t checkpoint_every{1000};
  bool seed_provided{false};  // whether any source set `seed` explicitly
};

/// Parses `key = value` lines; '#' starts a comment, blank lines are skipped.
/// Unknown keys or unparseable values are invalid input.
RunConfig load_config(const std::filesystem::path& path);

/// Applies one key/value pair onto an existing config.
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

Arena arena_of(const RunConfig& config);
RobotParams robot_params_of(const RunConfig& config);
SensorModel sensor_model_of(const RunConfig& config);
ExploreConfig explore_config_of(const RunConfig& config);

/// Digest of the run-determining parameters (see config_digest in explore).
std::string run_digest(const RunConfig& config);

}  // namespace percept

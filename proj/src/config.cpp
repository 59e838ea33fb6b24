#include "percept/config.hpp"

#include <charconv>
#include <fstream>

#include "percept/errors.hpp"

namespace percept {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T v{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw invalid_input("config key '" + key + "': bad value '" + value + "'");
  }
  return v;
}

bool parse_flag(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw invalid_input("config key '" + key + "': expected on/off, got '" + value + "'");
}

}  // namespace

void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "side") {
    config.side = parse_number<double>(key, value);
  } else if (key == "body_radius") {
    config.body_radius = parse_number<double>(key, value);
  } else if (key == "wheel_separation") {
    config.wheel_separation = parse_number<double>(key, value);
  } else if (key == "max_speed") {
    config.max_speed = parse_number<double>(key, value);
  } else if (key == "dt") {
    config.dt = parse_number<double>(key, value);
  } else if (key == "action_duration") {
    config.action_duration = parse_number<double>(key, value);
  } else if (key == "stuck_threshold") {
    config.stuck_threshold = parse_number<double>(key, value);
  } else if (key == "tolerance") {
    config.tolerance = parse_number<double>(key, value);
  } else if (key == "max_range") {
    config.max_range = parse_number<double>(key, value);
  } else if (key == "seed") {
    config.seed = parse_number<std::uint64_t>(key, value);
    config.seed_provided = true;
  } else if (key == "n_actions") {
    config.n_actions = parse_number<std::uint64_t>(key, value);
  } else if (key == "noise") {
    config.noise = parse_flag(key, value);
  } else if (key == "resolution") {
    config.resolution = parse_number<int>(key, value);
  } else if (key == "checkpoint_every") {
    config.checkpoint_every = parse_number<std::uint64_t>(key, value);
  } else {
    throw invalid_input("unknown config key '" + key + "'");
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config: " + path.string());
  RunConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw parse_error(line_no, "expected 'key = value', got '" + stripped + "'");
    }
    apply_config_entry(config, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return config;
}

Arena arena_of(const RunConfig& config) { return Arena{config.side}; }

RobotParams robot_params_of(const RunConfig& config) {
  return RobotParams{config.body_radius, config.wheel_separation, config.max_speed, config.dt};
}

SensorModel sensor_model_of(const RunConfig& config) {
  SensorModel model;
  model.mount_radius = config.body_radius;
  model.tolerance = config.tolerance;
  model.max_range = config.max_range;
  model.lookup_table = default_lookup_table(config.max_range);
  return model;
}

ExploreConfig explore_config_of(const RunConfig& config) {
  ExploreConfig ec;
  ec.n_actions = config.n_actions;
  ec.action_duration = config.action_duration;
  ec.max_speed = config.max_speed;
  ec.stuck_threshold = config.stuck_threshold;
  ec.noise_enabled = config.noise;
  ec.seed = config.seed;
  ec.checkpoint_every = config.checkpoint_every;
  return ec;
}

std::string run_digest(const RunConfig& config) {
  return config_digest(explore_config_of(config), arena_of(config), robot_params_of(config),
                       sensor_model_of(config));
}

}  // namespace percept

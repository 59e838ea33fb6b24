#include "percept/explore.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "percept/errors.hpp"

namespace percept {

namespace {

// FNV-1a over a canonical text rendering of the parameters.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void put(std::string& out, const char* key, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s=%.17g;", key, v);
  out += buf;
}

std::uint64_t substeps_per_action(const ExploreConfig& config, const RobotParams& params) {
  if (!(config.action_duration > 0.0)) {
    throw invalid_input("action_duration must be positive");
  }
  if (!(params.dt > 0.0)) throw invalid_input("dt must be positive");
  const double ratio = config.action_duration / params.dt;
  const auto n = static_cast<std::uint64_t>(std::llround(ratio));
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9) {
    throw invalid_input("action_duration must be an exact multiple of dt");
  }
  return n;
}

struct RunState {
  Rng rng;
  Pose pose;
  std::uint64_t completed{0};
  std::uint64_t stuck{0};
};

Checkpoint make_checkpoint(const RunState& state, const std::string& digest) {
  Checkpoint ckpt;
  ckpt.actions_completed = state.completed;
  ckpt.rng_state = state.rng.state();
  ckpt.last_pose = state.pose;
  ckpt.config_digest = digest;
  return ckpt;
}

RunSummary run_from(RunState state, const ExploreConfig& config, const Arena& arena,
                    const RobotParams& params, const SensorModel& model, LogSink& sink,
                    const CheckpointSink& checkpoint_sink, const std::string& digest) {
  if (config.stuck_threshold < 0.0) throw invalid_input("stuck_threshold must be >= 0");
  if (config.max_speed < 0.0) throw invalid_input("max_speed must be >= 0");
  if (model.count != kSensorCount) {
    throw invalid_input("log schema requires exactly 16 sensors");
  }
  const std::uint64_t n_sub = substeps_per_action(config, params);

  while (state.completed < config.n_actions) {
    const auto [v_left, v_right] = sample_action(state.rng, config.max_speed);
    const Pose start = state.pose;
    for (std::uint64_t s = 0; s < n_sub; ++s) {
      state.pose = integrate_pose(state.pose, v_left, v_right, params.dt, params, arena);
    }
    const SensorFrame frame =
        read_sensors(state.pose, arena, model, config.noise_enabled, state.rng);

    LogRecord rec;
    rec.index = state.completed;
    rec.v_left = v_left;
    rec.v_right = v_right;
    rec.x0 = start.x;
    rec.y0 = start.y;
    rec.x1 = state.pose.x;
    rec.y1 = state.pose.y;
    rec.dx = state.pose.x - start.x;
    rec.dy = state.pose.y - start.y;
    rec.yaw = frame.yaw;
    for (int i = 0; i < kSensorCount; ++i) rec.ds[i] = frame.values[i];
    rec.stuck = detect_stuck({start.x, start.y}, {state.pose.x, state.pose.y},
                             config.stuck_threshold);
    if (rec.stuck) ++state.stuck;

    sink.append(rec);
    ++state.completed;
    if (checkpoint_sink && config.checkpoint_every > 0 &&
        state.completed % config.checkpoint_every == 0 && state.completed < config.n_actions) {
      sink.flush();
      checkpoint_sink(make_checkpoint(state, digest));
    }
  }
  sink.flush();
  if (checkpoint_sink) checkpoint_sink(make_checkpoint(state, digest));
  return {state.completed, state.stuck};
}

}  // namespace

std::pair<double, double> sample_action(Rng& rng, double max_speed) {
  if (max_speed < 0.0) throw invalid_input("max_speed must be >= 0");
  const double left = rng.uniform(-max_speed, max_speed);
  const double right = rng.uniform(-max_speed, max_speed);
  return {left, right};
}

bool detect_stuck(const Vec2& start, const Vec2& end, double threshold) {
  if (threshold < 0.0) throw invalid_input("stuck threshold must be >= 0");
  return distance(start, end) < threshold;
}

std::string config_digest(const ExploreConfig& config, const Arena& arena,
                          const RobotParams& params, const SensorModel& model) {
  std::string canon;
  put(canon, "side", arena.side);
  put(canon, "body_radius", params.body_radius);
  put(canon, "wheel_separation", params.wheel_separation);
  put(canon, "wheel_max_speed", params.max_speed);
  put(canon, "dt", params.dt);
  put(canon, "action_duration", config.action_duration);
  put(canon, "sample_max_speed", config.max_speed);
  put(canon, "stuck_threshold", config.stuck_threshold);
  put(canon, "noise", config.noise_enabled ? 1.0 : 0.0);
  put(canon, "seed", static_cast<double>(config.seed));
  put(canon, "sensor_count", model.count);
  put(canon, "mount_radius", model.mount_radius);
  put(canon, "tolerance", model.tolerance);
  put(canon, "max_range", model.max_range);
  for (const LookupRow& row : model.lookup_table) {
    put(canon, "d", row.distance);
    put(canon, "v", row.value);
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(canon)));
  return buf;
}

RunSummary run_exploration(const ExploreConfig& config, const Arena& arena,
                           const RobotParams& params, const SensorModel& model, LogSink& sink,
                           const CheckpointSink& checkpoint_sink) {
  RunState state{Rng(config.seed), Pose{0.0, 0.0, 0.0}, 0, 0};
  return run_from(std::move(state), config, arena, params, model, sink, checkpoint_sink,
                  config_digest(config, arena, params, model));
}

RunSummary resume(const Checkpoint& checkpoint, const ExploreConfig& config, const Arena& arena,
                  const RobotParams& params, const SensorModel& model, const Dataset& existing,
                  LogSink& sink, const CheckpointSink& checkpoint_sink) {
  const std::string digest = config_digest(config, arena, params, model);
  if (checkpoint.config_digest != digest) {
    throw corrupt_checkpoint("checkpoint was produced under a different configuration");
  }
  if (existing.size() != checkpoint.actions_completed) {
    throw corrupt_checkpoint("log holds " + std::to_string(existing.size()) +
                             " records but checkpoint says " +
                             std::to_string(checkpoint.actions_completed));
  }
  if (checkpoint.actions_completed > config.n_actions) {
    throw invalid_input("checkpoint is beyond the requested action count");
  }

  RunState state{Rng(0), checkpoint.last_pose, checkpoint.actions_completed, 0};
  state.rng.restore(checkpoint.rng_state);
  for (const LogRecord& rec : existing.records()) {
    if (rec.stuck) ++state.stuck;
  }
  return run_from(std::move(state), config, arena, params, model, sink, checkpoint_sink, digest);
}

void write_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  nlohmann::json j;
  j["actions_completed"] = checkpoint.actions_completed;
  j["rng_state"] = checkpoint.rng_state;
  j["last_pose"] = {{"x", checkpoint.last_pose.x},
                    {"y", checkpoint.last_pose.y},
                    {"theta", checkpoint.last_pose.theta}};
  j["config_digest"] = checkpoint.config_digest;

  const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::out | std::ios::trunc);
    if (!out) throw io_error("cannot open checkpoint for writing: " + tmp.string());
    out << j.dump(2) << '\n';
    out.flush();
    if (!out) throw io_error("write failure on " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open checkpoint: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    Checkpoint ckpt;
    ckpt.actions_completed = j.at("actions_completed").get<std::uint64_t>();
    ckpt.rng_state = j.at("rng_state").get<std::string>();
    ckpt.last_pose.x = j.at("last_pose").at("x").get<double>();
    ckpt.last_pose.y = j.at("last_pose").at("y").get<double>();
    ckpt.last_pose.theta = j.at("last_pose").at("theta").get<double>();
    ckpt.config_digest = j.at("config_digest").get<std::string>();
    return ckpt;
  } catch (const nlohmann::json::exception& e) {
    throw corrupt_checkpoint("malformed checkpoint " + path.string() + ": " + e.what());
  }
}

}  // namespace percept

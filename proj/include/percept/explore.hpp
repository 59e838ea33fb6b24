#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>

#include "percept/dataset.hpp"
#include "percept/rng.hpp"
#include "percept/sim.hpp"

namespace percept {

struct ExploreConfig {
  std::uint64_t n_actions{0};
  double action_duration{5.0};
  double max_speed{2.0};
  double stuck_threshold{0.01};
  bool noise_enabled{false};
  std::uint64_t seed{0};
  std::uint64_t checkpoint_every{1000};
};

/// Durable run marker; restoring it continues the walk bit-exactly.
struct Checkpoint {
  std::uint64_t actions_completed{0};
  std::string rng_state;
  Pose last_pose;
  std::string config_digest;
};

struct RunSummary {
  std::uint64_t actions_completed{0};
  std::uint64_t stuck_count{0};
};

/// Two independent draws from Uniform(-max_speed, +max_speed), left first.
std::pair<double, double> sample_action(Rng& rng, double max_speed);

/// True iff the Euclidean displacement is strictly below the threshold.
bool detect_stuck(const Vec2& start, const Vec2& end, double threshold);

/// Content hash of everything that determines the log byte stream: world and
/// body geometry, sensor model, sampling parameters, seed, noise. The target
/// action count is deliberately excluded so a finished run can be extended.
std::string config_digest(const ExploreConfig& config, const Arena& arena,
                          const RobotParams& params, const SensorModel& model);

using CheckpointSink = std::function<void(const Checkpoint&)>;

/// Runs the random walk from the arena center: per action, sample a wheel
/// command, hold it through action_duration in dt substeps, read the sensors
/// once at action end, and append one record. The sink is flushed and a
/// checkpoint emitted every checkpoint_every actions and at completion.
RunSummary run_exploration(const ExploreConfig& config, const Arena& arena,
                           const RobotParams& params, const SensorModel& model, LogSink& sink,
                           const CheckpointSink& checkpoint_sink = {});

/// Continues a checkpointed run; the final log is byte-identical to an
/// uninterrupted run with the same configuration. `existing` must hold
/// exactly the checkpointed number of records.
RunSummary resume(const Checkpoint& checkpoint, const ExploreConfig& config, const Arena& arena,
                  const RobotParams& params, const SensorModel& model, const Dataset& existing,
                  LogSink& sink, const CheckpointSink& checkpoint_sink = {});

/// Checkpoint JSON persistence (atomic write).
void write_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace percept

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

#include "percept/dataset.hpp"
#include "percept/explore.hpp"
#include "percept/rng.hpp"
#include "percept/sim.hpp"

namespace support {

/// In-memory exploration run with the default arena, robot, and sensor model.
inline percept::Dataset arena_run(std::uint64_t n_actions, std::uint64_t seed,
                                  bool noise = false) {
  percept::ExploreConfig config;
  config.n_actions = n_actions;
  config.seed = seed;
  config.noise_enabled = noise;
  percept::MemoryLogSink sink;
  percept::run_exploration(config, percept::Arena{}, percept::RobotParams{},
                           percept::default_sensor_model(), sink);
  return percept::Dataset(sink.take());
}

/// Records whose first two sensor columns are the end position itself; the
/// perceptual map is then the identity on the plane and every spatial
/// structure must survive it. x spans twice the y range so the principal
/// axes come out in a fixed order.
inline percept::Dataset identity_embedding(std::size_t n, std::uint64_t seed) {
  percept::Rng rng(seed);
  std::vector<percept::LogRecord> records(n);
  for (std::size_t i = 0; i < n; ++i) {
    percept::LogRecord& rec = records[i];
    rec.index = i;
    rec.x1 = rng.uniform(-4.0, 4.0);
    rec.y1 = rng.uniform(-2.0, 2.0);
    rec.ds[0] = rec.x1;
    rec.ds[1] = rec.y1;
  }
  return percept::Dataset(std::move(records));
}

/// Sensor columns of i.i.d. noise carrying no position information at all.
inline percept::Dataset noise_embedding(std::size_t n, std::uint64_t seed) {
  percept::Rng rng(seed);
  std::vector<percept::LogRecord> records(n);
  for (std::size_t i = 0; i < n; ++i) {
    percept::LogRecord& rec = records[i];
    rec.index = i;
    rec.x1 = rng.uniform(-5.0, 5.0);
    rec.y1 = rng.uniform(-5.0, 5.0);
    for (double& v : rec.ds) v = rng.unit();
  }
  return percept::Dataset(std::move(records));
}

/// Fresh scratch directory under the system temp root, wiped on reuse.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("percept_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Whole file as a string; empty if unreadable.
inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return text;
}

}  // namespace support

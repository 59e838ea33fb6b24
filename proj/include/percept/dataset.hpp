#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "percept/types.hpp"

namespace percept {

inline constexpr int kSensorCount = 16;

/// One exploration action. dx/dy are stored, not recomputed, so persistence
/// round-trips field-for-field.
struct LogRecord {
  std::uint64_t index{0};
  double v_left{0.0};
  double v_right{0.0};
  double x0{0.0};
  double y0{0.0};
  double x1{0.0};
  double y1{0.0};
  double dx{0.0};
  double dy{0.0};
  double yaw{0.0};
  std::array<double, kSensorCount> ds{};
  bool stuck{false};
};

struct Provenance {
  std::string config_digest;
  std::uint64_t seed{0};
};

/// Ordered, immutable collection of log records with contiguous indices.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<LogRecord> records, Provenance prov = {});

  std::size_t size() const { return records_.size(); }
  const LogRecord& operator[](std::size_t i) const { return records_[i]; }
  const std::vector<LogRecord>& records() const { return records_; }
  const Provenance& provenance() const { return prov_; }

 private:
  std::vector<LogRecord> records_;
  Provenance prov_;
};

/// Lightweight row selection over a dataset; the analyses' common currency.
struct Subset {
  const Dataset* data{nullptr};
  std::vector<std::size_t> rows;

  static Subset all(const Dataset& d);
  std::size_t size() const { return rows.size(); }
  const LogRecord& operator[](std::size_t i) const { return (*data)[rows[i]]; }
};

/// Exact log CSV header.
std::string log_header();

/// Renders a double with 9 significant digits, the log's wire precision.
std::string format_g9(double v);

/// Append-oriented record sink; explore writes through this.
class LogSink {
 public:
  virtual ~LogSink() = default;
  virtual void append(const LogRecord& rec) = 0;
  virtual void flush() = 0;
};

/// CSV-backed sink. Fresh mode truncates and writes the header; append mode
/// expects an existing well-formed log.
class CsvLogWriter final : public LogSink {
 public:
  enum class Mode { fresh, append };
  CsvLogWriter(const std::filesystem::path& path, Mode mode = Mode::fresh);

  void append(const LogRecord& rec) override;
  void flush() override;

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

/// In-memory sink for tests and in-process pipelines.
class MemoryLogSink final : public LogSink {
 public:
  void append(const LogRecord& rec) override { records_.push_back(rec); }
  void flush() override {}
  const std::vector<LogRecord>& records() const { return records_; }
  std::vector<LogRecord> take() { return std::move(records_); }

 private:
  std::vector<LogRecord> records_;
};

/// Writes the full dataset as CSV (temp file + rename).
void write_log(const Dataset& dataset, const std::filesystem::path& path);

/// Parses a log CSV; malformed content raises parse_error with the line.
Dataset read_log(const std::filesystem::path& path);

/// Keeps records with |wrap(yaw - center)| <= tolerance.
Subset filter_by_yaw(const Subset& in, double center, double tolerance);
Subset filter_by_yaw(const Dataset& dataset, double center, double tolerance);

/// Per-column min-max scaled sensor matrix. A constant column maps to zeros.
struct NormalizedSensors {
  Matrix values;                                              // N x 16 in [0, 1]
  std::array<std::pair<double, double>, kSensorCount> range;  // per-column (min, max)
};

NormalizedSensors normalize_sensors(const Subset& in);
NormalizedSensors normalize_sensors(const Dataset& dataset);

double denormalize(const NormalizedSensors& norm, std::size_t column, double v);

/// Uniform square binning of the arena. Cells are half-open except the far
/// edge, so every in-arena point maps to exactly one cell.
struct GridSpec {
  int resolution{50};
  double extent{10.0};
};

/// (row, col) of a point; row indexes y, col indexes x. Out-of-arena points
/// are invalid input.
std::pair<int, int> cell_of(const GridSpec& grid, double x, double y);

/// Center coordinates of a cell, the inverse view of cell_of.
Vec2 cell_center(const GridSpec& grid, int row, int col);

struct OccupancyGrid {
  GridSpec grid;
  std::vector<std::int64_t> counts;  // row-major, resolution^2

  std::int64_t at(int row, int col) const { return counts[static_cast<std::size_t>(row) * grid.resolution + col]; }
};

/// Visit counts of record end positions per cell.
OccupancyGrid occupancy_grid(const Subset& in, const GridSpec& grid);
OccupancyGrid occupancy_grid(const Dataset& dataset, const GridSpec& grid);

}  // namespace percept

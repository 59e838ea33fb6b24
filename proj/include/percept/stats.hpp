#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "percept/dataset.hpp"

namespace percept {

/// Per-cell standard deviation map over the arena. A cell backed by fewer
/// than two samples (plain) or windows (rolling) is empty, never zero.
struct StdGrid {
  enum class Mode { plain, rolling };

  GridSpec grid;
  Mode mode{Mode::plain};
  std::size_t window{0};             // rolling only
  std::vector<double> values;        // row-major, resolution^2; NaN where empty
  std::vector<std::int64_t> counts;  // samples (plain) or windows (rolling)

  std::size_t cell_index(int row, int col) const {
    return static_cast<std::size_t>(row) * grid.resolution + col;
  }
  bool has_value(int row, int col) const { return counts[cell_index(row, col)] >= 2; }
  double at(int row, int col) const { return values[cell_index(row, col)]; }
};

/// Population standard deviation of one sensor's readings, binned by the
/// record end position.
StdGrid grid_std(const Subset& in, int sensor_id, const GridSpec& grid);
StdGrid grid_std(const Dataset& dataset, int sensor_id, const GridSpec& grid);

/// Standard deviation over each length-`window` sliding window of the
/// time-ordered readings; each window lands in the cell of its last record
/// and cells average the windows they collect.
StdGrid rolling_grid_std(const Dataset& dataset, int sensor_id, const GridSpec& grid,
                         std::size_t window);

/// Pearson coefficients between raw sensor readings. A constant column has no
/// defined coefficient against the others; those entries are NaN.
struct CorrelationMatrix {
  std::array<std::array<double, kSensorCount>, kSensorCount> r{};

  double at(int i, int j) const { return r[i][j]; }
};

CorrelationMatrix sensor_correlation(const Subset& in);
CorrelationMatrix sensor_correlation(const Dataset& dataset);
CorrelationMatrix sensor_correlation(const Dataset& dataset, double yaw_center,
                                     double yaw_tolerance);

/// Mean coefficient over the sensor pairs `offset` apart on the mounting ring
/// (offset 1 = adjacent, 8 = opposite). Undefined entries are skipped.
double mean_offset_correlation(const CorrelationMatrix& m, int offset);

/// Mean |r| over distinct off-diagonal pairs, skipping undefined entries.
double mean_abs_correlation(const CorrelationMatrix& m);

}  // namespace percept

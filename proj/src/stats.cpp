#include "percept/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "percept/errors.hpp"

namespace percept {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_sensor(int sensor_id) {
  if (sensor_id < 0 || sensor_id >= kSensorCount) {
    throw invalid_input("sensor id out of range");
  }
}

/// Streaming mean/variance accumulator. Keeps constant input at exactly zero
/// variance, which naive sum-of-squares does not.
struct Welford {
  std::int64_t n{0};
  double mean{0.0};
  double m2{0.0};

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  double population_std() const { return std::sqrt(m2 / static_cast<double>(n)); }
};

StdGrid empty_grid(const GridSpec& grid, StdGrid::Mode mode, std::size_t window) {
  StdGrid out;
  out.grid = grid;
  out.mode = mode;
  out.window = window;
  const auto cells = static_cast<std::size_t>(grid.resolution) * grid.resolution;
  out.values.assign(cells, kNaN);
  out.counts.assign(cells, 0);
  return out;
}

}  // namespace

StdGrid grid_std(const Subset& in, int sensor_id, const GridSpec& grid) {
  check_sensor(sensor_id);
  StdGrid out = empty_grid(grid, StdGrid::Mode::plain, 0);
  std::vector<Welford> acc(out.values.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    const LogRecord& rec = in[i];
    const auto [row, col] = cell_of(grid, rec.x1, rec.y1);
    acc[out.cell_index(row, col)].add(rec.ds[sensor_id]);
  }
  for (std::size_t c = 0; c < acc.size(); ++c) {
    out.counts[c] = acc[c].n;
    if (acc[c].n >= 2) out.values[c] = acc[c].population_std();
  }
  return out;
}

StdGrid grid_std(const Dataset& dataset, int sensor_id, const GridSpec& grid) {
  return grid_std(Subset::all(dataset), sensor_id, grid);
}

StdGrid rolling_grid_std(const Dataset& dataset, int sensor_id, const GridSpec& grid,
                         std::size_t window) {
  check_sensor(sensor_id);
  if (window < 2) throw invalid_input("window must be >= 2");
  if (dataset.size() < window) throw invalid_input("dataset smaller than window");

  StdGrid out = empty_grid(grid, StdGrid::Mode::rolling, window);
  std::vector<double> sums(out.values.size(), 0.0);
  for (std::size_t last = window - 1; last < dataset.size(); ++last) {
    Welford w;
    for (std::size_t i = last + 1 - window; i <= last; ++i) {
      w.add(dataset[i].ds[sensor_id]);
    }
    const auto [row, col] = cell_of(grid, dataset[last].x1, dataset[last].y1);
    const std::size_t c = out.cell_index(row, col);
    sums[c] += w.population_std();
    ++out.counts[c];
  }
  for (std::size_t c = 0; c < sums.size(); ++c) {
    if (out.counts[c] >= 2) out.values[c] = sums[c] / static_cast<double>(out.counts[c]);
  }
  return out;
}

CorrelationMatrix sensor_correlation(const Subset& in) {
  const std::size_t n = in.size();
  if (n < 3) throw insufficient_data("correlation needs at least 3 records");

  std::array<double, kSensorCount> mean{};
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < kSensorCount; ++c) mean[c] += in[i].ds[c];
  }
  for (double& m : mean) m /= static_cast<double>(n);

  // Gram matrix of centered columns; self-products sit on the diagonal.
  std::array<std::array<double, kSensorCount>, kSensorCount> s{};
  for (std::size_t i = 0; i < n; ++i) {
    std::array<double, kSensorCount> d;
    for (int c = 0; c < kSensorCount; ++c) d[c] = in[i].ds[c] - mean[c];
    for (int a = 0; a < kSensorCount; ++a) {
      for (int b = a; b < kSensorCount; ++b) s[a][b] += d[a] * d[b];
    }
  }

  CorrelationMatrix out;
  for (int a = 0; a < kSensorCount; ++a) {
    for (int b = a; b < kSensorCount; ++b) {
      double r;
      if (a == b) {
        r = 1.0;
      } else if (s[a][a] > 0.0 && s[b][b] > 0.0) {
        r = std::clamp(s[a][b] / std::sqrt(s[a][a] * s[b][b]), -1.0, 1.0);
      } else {
        r = kNaN;
      }
      out.r[a][b] = r;
      out.r[b][a] = r;
    }
  }
  return out;
}

CorrelationMatrix sensor_correlation(const Dataset& dataset) {
  return sensor_correlation(Subset::all(dataset));
}

CorrelationMatrix sensor_correlation(const Dataset& dataset, double yaw_center,
                                     double yaw_tolerance) {
  return sensor_correlation(filter_by_yaw(dataset, yaw_center, yaw_tolerance));
}

double mean_offset_correlation(const CorrelationMatrix& m, int offset) {
  if (offset < 1 || offset > kSensorCount / 2) {
    throw invalid_input("offset out of range");
  }
  double total = 0.0;
  int used = 0;
  for (int i = 0; i < kSensorCount; ++i) {
    const double r = m.at(i, (i + offset) % kSensorCount);
    if (std::isfinite(r)) {
      total += r;
      ++used;
    }
  }
  return used > 0 ? total / used : kNaN;
}

double mean_abs_correlation(const CorrelationMatrix& m) {
  double total = 0.0;
  int used = 0;
  for (int i = 0; i < kSensorCount; ++i) {
    for (int j = i + 1; j < kSensorCount; ++j) {
      const double r = m.at(i, j);
      if (std::isfinite(r)) {
        total += std::abs(r);
        ++used;
      }
    }
  }
  return used > 0 ? total / used : kNaN;
}

}  // namespace percept

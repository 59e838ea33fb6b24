#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "percept/errors.hpp"
#include "percept/stats.hpp"
#include "percept/rng.hpp"
#include "support.hpp"

using namespace percept;

namespace {

/// Records pinned at one position with a chosen sensor-0 time series.
std::vector<LogRecord> pinned_series(const std::vector<double>& readings, double x, double y) {
  std::vector<LogRecord> records(readings.size());
  for (std::size_t i = 0; i < readings.size(); ++i) {
    records[i].index = i;
    records[i].x1 = x;
    records[i].y1 = y;
    records[i].ds[0] = readings[i];
  }
  return records;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("grid_std: population deviation per cell") {
  const Dataset data(pinned_series({0.0, 2.0}, 1.0, 1.0));
  const StdGrid grid = grid_std(data, 0, GridSpec{});
  const auto [row, col] = cell_of(GridSpec{}, 1.0, 1.0);
  REQUIRE(grid.has_value(row, col));
  // Population std of {0, 2} is exactly 1.
  CHECK(grid.at(row, col) == 1.0);
  CHECK(grid.counts[grid.cell_index(row, col)] == 2);
  CHECK(grid.mode == StdGrid::Mode::plain);
}

TEST_CASE("grid_std: constant readings give exactly zero, single samples stay empty") {
  auto records = pinned_series({5.0, 5.0, 5.0}, -2.0, 3.0);
  LogRecord lone;
  lone.index = 3;
  lone.x1 = 4.0;
  lone.y1 = -4.0;
  lone.ds[0] = 7.0;
  records.push_back(lone);
  const Dataset data(records);
  const StdGrid grid = grid_std(data, 0, GridSpec{});

  const auto [crow, ccol] = cell_of(GridSpec{}, -2.0, 3.0);
  CHECK(grid.at(crow, ccol) == 0.0);

  const auto [lrow, lcol] = cell_of(GridSpec{}, 4.0, -4.0);
  CHECK_FALSE(grid.has_value(lrow, lcol));
  CHECK(std::isnan(grid.at(lrow, lcol)));
  CHECK(grid.counts[grid.cell_index(lrow, lcol)] == 1);

  const auto [erow, ecol] = cell_of(GridSpec{}, 0.0, 0.0);
  CHECK_FALSE(grid.has_value(erow, ecol));
  CHECK(grid.counts[grid.cell_index(erow, ecol)] == 0);
}

TEST_CASE("grid_std: scaling the readings scales the deviations") {
  const Dataset base = support::arena_run(800, 19, true);
  std::vector<LogRecord> scaled_records(base.records().begin(), base.records().end());
  for (LogRecord& rec : scaled_records) rec.ds[12] *= 4.0;
  const Dataset scaled(scaled_records);

  const StdGrid a = grid_std(base, 12, GridSpec{});
  const StdGrid b = grid_std(scaled, 12, GridSpec{});
  bool any = false;
  for (int row = 0; row < 50; ++row) {
    for (int col = 0; col < 50; ++col) {
      REQUIRE(a.has_value(row, col) == b.has_value(row, col));
      if (!a.has_value(row, col)) continue;
      any = true;
      // Powers of two commute exactly with the variance arithmetic.
      CHECK(b.at(row, col) == 4.0 * a.at(row, col));
    }
  }
  CHECK(any);
}

TEST_CASE("grid_std: sensor id validation") {
  const Dataset data(pinned_series({0.0, 2.0}, 0.0, 0.0));
  CHECK_THROWS_AS(grid_std(data, -1, GridSpec{}), invalid_input);
  CHECK_THROWS_AS(grid_std(data, 16, GridSpec{}), invalid_input);
}

TEST_CASE("rolling_grid_std: alternating series under window two") {
  const Dataset data(pinned_series({0.0, 2.0, 0.0, 2.0, 0.0, 2.0}, 1.0, 1.0));
  const StdGrid grid = rolling_grid_std(data, 0, GridSpec{}, 2);
  const auto [row, col] = cell_of(GridSpec{}, 1.0, 1.0);
  REQUIRE(grid.has_value(row, col));
  // Every window is {0,2} or {2,0}; both have population std exactly 1.
  CHECK(grid.at(row, col) == 1.0);
  CHECK(grid.counts[grid.cell_index(row, col)] == 5);
  CHECK(grid.mode == StdGrid::Mode::rolling);
  CHECK(grid.window == 2);
}

TEST_CASE("rolling_grid_std: constant series maps to zero") {
  const Dataset data(pinned_series({3.0, 3.0, 3.0, 3.0}, 0.5, 0.5));
  const StdGrid grid = rolling_grid_std(data, 0, GridSpec{}, 3);
  const auto [row, col] = cell_of(GridSpec{}, 0.5, 0.5);
  REQUIRE(grid.has_value(row, col));
  CHECK(grid.at(row, col) == 0.0);
}

TEST_CASE("rolling_grid_std: windows land in the cell of their last record") {
  // Two records in cell A, then one in far cell B: the only window containing
  // the move belongs to B.
  std::vector<LogRecord> records(3);
  for (std::size_t i = 0; i < 3; ++i) records[i].index = i;
  records[0].x1 = records[0].y1 = -4.0;
  records[0].ds[0] = 0.0;
  records[1].x1 = records[1].y1 = -4.0;
  records[1].ds[0] = 2.0;
  records[2].x1 = records[2].y1 = 4.0;
  records[2].ds[0] = 4.0;
  const Dataset data(records);
  const StdGrid grid = rolling_grid_std(data, 0, GridSpec{}, 2);

  const auto [arow, acol] = cell_of(GridSpec{}, -4.0, -4.0);
  const auto [brow, bcol] = cell_of(GridSpec{}, 4.0, 4.0);
  // Cell A holds one window {0,2}; a single window is not enough for a value.
  CHECK(grid.counts[grid.cell_index(arow, acol)] == 1);
  CHECK_FALSE(grid.has_value(arow, acol));
  CHECK(grid.counts[grid.cell_index(brow, bcol)] == 1);
}

TEST_CASE("rolling_grid_std: window validation") {
  const Dataset data(pinned_series({0.0, 2.0, 4.0}, 0.0, 0.0));
  CHECK_THROWS_AS(rolling_grid_std(data, 0, GridSpec{}, 0), invalid_input);
  CHECK_THROWS_AS(rolling_grid_std(data, 0, GridSpec{}, 1), invalid_input);
  CHECK_THROWS_AS(rolling_grid_std(data, 0, GridSpec{}, 4), invalid_input);
  CHECK_NOTHROW(rolling_grid_std(data, 0, GridSpec{}, 3));
}

TEST_CASE("rolling and plain deviation maps agree where both are defined") {
  const Dataset data = support::arena_run(3000, 29, true);
  const GridSpec coarse{10, 10.0};
  const StdGrid plain = grid_std(data, 12, coarse);
  const StdGrid rolling = rolling_grid_std(data, 12, coarse, 10);
  std::vector<double> xs, ys;
  for (int row = 0; row < 10; ++row) {
    for (int col = 0; col < 10; ++col) {
      if (plain.has_value(row, col) && rolling.has_value(row, col)) {
        xs.push_back(plain.at(row, col));
        ys.push_back(rolling.at(row, col));
      }
    }
  }
  REQUIRE(xs.size() >= 10);
  CHECK(pearson(xs, ys) > 0.0);
}

TEST_CASE("sensor_correlation: duplicated columns correlate perfectly") {
  Rng rng(41);
  std::vector<LogRecord> records(50);
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].index = i;
    for (int c = 0; c < kSensorCount; ++c) records[i].ds[c] = rng.unit();
    records[i].ds[5] = records[i].ds[3];
    records[i].ds[9] = -records[i].ds[3];
  }
  const CorrelationMatrix m = sensor_correlation(Dataset(records));
  CHECK(m.at(3, 5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.at(3, 9) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("sensor_correlation: symmetric with unit diagonal") {
  const Dataset data = support::arena_run(500, 43, true);
  const CorrelationMatrix m = sensor_correlation(data);
  for (int i = 0; i < kSensorCount; ++i) {
    CHECK(m.at(i, i) == 1.0);
    for (int j = 0; j < i; ++j) {
      CHECK(m.at(i, j) == m.at(j, i));
      CHECK(std::abs(m.at(i, j)) <= 1.0);
    }
  }
}

TEST_CASE("sensor_correlation: independent noise decorrelates") {
  const Dataset data = support::noise_embedding(10000, 47);
  const CorrelationMatrix m = sensor_correlation(data);
  for (int i = 0; i < kSensorCount; ++i) {
    for (int j = 0; j < i; ++j) CHECK(std::abs(m.at(i, j)) < 0.05);
  }
}

TEST_CASE("sensor_correlation: constant columns have no defined coefficient") {
  Rng rng(53);
  std::vector<LogRecord> records(20);
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].index = i;
    for (int c = 0; c < kSensorCount; ++c) records[i].ds[c] = rng.unit();
    records[i].ds[7] = 42.0;
  }
  const CorrelationMatrix m = sensor_correlation(Dataset(records));
  CHECK(m.at(7, 7) == 1.0);
  for (int j = 0; j < kSensorCount; ++j) {
    if (j == 7) continue;
    CHECK(std::isnan(m.at(7, j)));
    CHECK(std::isnan(m.at(j, 7)));
  }
  // Undefined entries are skipped, not propagated.
  CHECK(std::isfinite(mean_abs_correlation(m)));
  CHECK(std::isfinite(mean_offset_correlation(m, 1)));
}

TEST_CASE("sensor_correlation: needs at least three records") {
  CHECK_THROWS_AS(sensor_correlation(Dataset(pinned_series({0.0, 1.0}, 0.0, 0.0))),
                  insufficient_data);
  CHECK_NOTHROW(sensor_correlation(Dataset(pinned_series({0.0, 1.0, 2.0}, 0.0, 0.0))));
}

TEST_CASE("sensor_correlation: yaw overload equals filtering first") {
  const Dataset data = support::arena_run(2000, 59, true);
  const CorrelationMatrix direct = sensor_correlation(data, -2.09, 0.3);
  const CorrelationMatrix filtered = sensor_correlation(filter_by_yaw(data, -2.09, 0.3));
  for (int i = 0; i < kSensorCount; ++i) {
    for (int j = 0; j < kSensorCount; ++j) CHECK(direct.at(i, j) == filtered.at(i, j));
  }
}

TEST_CASE("mean_offset_correlation: averages the ring at the given separation") {
  CorrelationMatrix m;
  for (int i = 0; i < kSensorCount; ++i) {
    for (int j = 0; j < kSensorCount; ++j) {
      const int gap = std::min((i - j + 16) % 16, (j - i + 16) % 16);
      m.r[i][j] = gap == 1 ? 0.75 : (gap == 8 ? -0.25 : 0.0);
    }
  }
  CHECK(mean_offset_correlation(m, 1) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(mean_offset_correlation(m, 8) == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(mean_offset_correlation(m, 2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(mean_offset_correlation(m, 0), invalid_input);
  CHECK_THROWS_AS(mean_offset_correlation(m, 9), invalid_input);
}

TEST_CASE("mean_abs_correlation: known small matrix") {
  CorrelationMatrix m;
  for (int i = 0; i < kSensorCount; ++i) {
    for (int j = 0; j < kSensorCount; ++j) m.r[i][j] = i == j ? 1.0 : -0.5;
  }
  CHECK(mean_abs_correlation(m) == doctest::Approx(0.5).epsilon(1e-12));
}

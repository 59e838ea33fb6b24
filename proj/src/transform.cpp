#include "percept/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "percept/errors.hpp"
#include "percept/geometry.hpp"
#include "percept/neighbors.hpp"

namespace percept {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_inside(const Arena& arena, Vec2 p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw invalid_input("probe geometry must be finite");
  }
  const double h = arena.half();
  if (std::abs(p.x) > h || std::abs(p.y) > h) {
    throw invalid_input("probe geometry must lie inside the arena");
  }
}

double lower_median(std::vector<double>& values) {
  const std::size_t mid = (values.size() - 1) / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  return values[mid];
}

}  // namespace

ProbeSet generate_line(const Arena& arena, Vec2 p0, Vec2 p1, int n) {
  if (n < 2) throw invalid_input("line probe needs at least 2 points");
  check_inside(arena, p0);
  check_inside(arena, p1);
  ProbeSet probe;
  probe.kind = ProbeSet::Kind::line;
  probe.points.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    probe.points.push_back({p0.x + t * (p1.x - p0.x), p0.y + t * (p1.y - p0.y)});
  }
  return probe;
}

ProbeSet generate_grid(const Arena& arena, Vec2 p0, Vec2 p1, int nx, int ny) {
  if (nx < 2 || ny < 2) throw invalid_input("grid probe needs nx, ny >= 2");
  check_inside(arena, p0);
  check_inside(arena, p1);
  ProbeSet probe;
  probe.kind = ProbeSet::Kind::grid;
  probe.nx = nx;
  probe.ny = ny;
  probe.points.reserve(static_cast<std::size_t>(nx) * ny);
  for (int i = 0; i < ny; ++i) {
    const double ty = static_cast<double>(i) / (ny - 1);
    const double y = p0.y + ty * (p1.y - p0.y);
    for (int j = 0; j < nx; ++j) {
      const double tx = static_cast<double>(j) / (nx - 1);
      probe.points.push_back({p0.x + tx * (p1.x - p0.x), y});
    }
  }
  return probe;
}

MappedProbe map_to_sensor_space(const ProbeSet& probe, const Dataset& dataset,
                                double yaw_center, double yaw_tolerance, std::size_t k) {
  if (k < 1) throw invalid_input("k must be >= 1");
  const Subset filtered = filter_by_yaw(dataset, yaw_center, yaw_tolerance);
  if (filtered.size() < k) {
    throw insufficient_data("yaw-filtered subset smaller than k");
  }

  // Whole-dataset column scaling; slice-local ranges can mirror the
  // projection plane between yaw slices (see hull_correspondence).
  const NormalizedSensors norm = normalize_sensors(dataset);
  Matrix readings;
  Matrix positions;
  readings.reserve(filtered.size());
  positions.reserve(filtered.size());
  for (std::size_t i = 0; i < filtered.size(); ++i) {
    readings.push_back(norm.values[filtered.rows[i]]);
    positions.push_back({filtered[i].x1, filtered[i].y1});
  }
  const SpatialIndex index = SpatialIndex::build(std::move(positions));
  const PcaBasis basis = fit_pca(readings);

  MappedProbe mapped;
  mapped.source = probe;
  mapped.images.reserve(probe.points.size());
  mapped.plane.reserve(probe.points.size());
  std::vector<double> column(k);
  for (const Vec2& p : probe.points) {
    const std::vector<Neighbor> found = index.knn({p.x, p.y}, k);
    Row image(kSensorCount);
    for (int c = 0; c < kSensorCount; ++c) {
      column.clear();
      for (const Neighbor& nb : found) column.push_back(readings[nb.index][c]);
      image[c] = lower_median(column);
    }
    mapped.plane.push_back(pca_apply(basis, image));
    mapped.images.push_back(std::move(image));
    mapped.coverage.push_back(found.size());
  }
  return mapped;
}

DistortionMetrics distortion_metrics(const MappedProbe& mapped) {
  DistortionMetrics metrics{kNaN, kNaN};
  const std::vector<Vec2>& plane = mapped.plane;

  if (mapped.source.kind == ProbeSet::Kind::line) {
    if (plane.size() < 3) throw invalid_input("line distortion needs at least 3 points");
    const Vec2 a = plane.front();
    const Vec2 b = plane.back();
    const double chord = distance(a, b);
    if (chord < 1e-12) throw degenerate_input("image chord is degenerate");
    double peak = 0.0;
    for (const Vec2& p : plane) {
      const double d = std::abs((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)) / chord;
      peak = std::max(peak, d);
    }
    metrics.straightness = peak / chord;
    return metrics;
  }

  const int nx = mapped.source.nx;
  const int ny = mapped.source.ny;
  if (nx < 2 || ny < 2) throw invalid_input("grid distortion needs a 2x2 lattice");
  std::vector<double> areas;
  areas.reserve(static_cast<std::size_t>(nx - 1) * (ny - 1));
  for (int i = 0; i + 1 < ny; ++i) {
    for (int j = 0; j + 1 < nx; ++j) {
      const std::vector<Vec2> quad = {
          plane[static_cast<std::size_t>(i) * nx + j],
          plane[static_cast<std::size_t>(i) * nx + j + 1],
          plane[static_cast<std::size_t>(i + 1) * nx + j + 1],
          plane[static_cast<std::size_t>(i + 1) * nx + j],
      };
      areas.push_back(std::abs(signed_area(quad)));
    }
  }
  double mean = 0.0;
  for (double a : areas) mean += a;
  mean /= static_cast<double>(areas.size());
  double var = 0.0;
  for (double a : areas) var += (a - mean) * (a - mean);
  var /= static_cast<double>(areas.size());
  metrics.grid_nonuniformity = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
  return metrics;
}

}  // namespace percept

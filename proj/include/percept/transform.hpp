#pragma once

#include <cstddef>
#include <vector>

#include "percept/dataset.hpp"
#include "percept/sim.hpp"
#include "percept/types.hpp"

namespace percept {

/// Evenly spaced physical-space test points: a segment or a row-major lattice.
struct ProbeSet {
  enum class Kind { line, grid };

  Kind kind{Kind::line};
  std::vector<Vec2> points;
  int nx{0};  // grid topology; zero for lines
  int ny{0};
};

/// n points from p0 to p1 inclusive; endpoints must lie inside the arena.
ProbeSet generate_line(const Arena& arena, Vec2 p0, Vec2 p1, int n);

/// nx x ny lattice over the rectangle spanned by p0 and p1, row-major with x
/// varying fastest.
ProbeSet generate_grid(const Arena& arena, Vec2 p0, Vec2 p1, int nx, int ny);

/// Probe points carried into sensor space: per-point median readings of the k
/// nearest logged neighbors, plus their 2-D PCA plane coordinates.
struct MappedProbe {
  ProbeSet source;
  Matrix images;                    // per point, 16 normalized values
  std::vector<Vec2> plane;
  std::vector<std::size_t> coverage;  // neighbors actually used per point
};

/// Neighbors are looked up in physical space over the yaw-filtered records;
/// each image dimension takes the lower median of the k neighbor readings
/// (whole-dataset normalization). The plane basis is fit on the filtered
/// subset's rows of that normalized matrix.
MappedProbe map_to_sensor_space(const ProbeSet& probe, const Dataset& dataset,
                                double yaw_center, double yaw_tolerance, std::size_t k);

/// Straightness deviation applies to lines (max perpendicular distance from
/// the first-to-last chord over its length); non-uniformity to grids
/// (coefficient of variation of image quad areas). The other field is NaN.
struct DistortionMetrics {
  double straightness;
  double grid_nonuniformity;
};

DistortionMetrics distortion_metrics(const MappedProbe& mapped);

}  // namespace percept

#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "percept/dataset.hpp"
#include "percept/types.hpp"

namespace percept {

/// Convex hull vertices in CCW order starting at the lexicographically
/// smallest point. Collinear input degenerates to the two extreme points.
struct Hull2D {
  std::vector<Vec2> vertices;
  double area{0.0};
  double perimeter{0.0};
};

/// Hull vertex positions expressed as indices into the input point set.
std::vector<std::size_t> convex_hull_indices(const std::vector<Vec2>& points);

Hull2D convex_hull_2d(const std::vector<Vec2>& points);

/// Shoelace signed area of a closed polygon; positive means CCW.
double signed_area(const std::vector<Vec2>& polygon);

/// (area, perimeter) over the closed vertex cycle. A two-vertex hull counts
/// its segment twice, keeping the metric total over degenerate hulls.
std::pair<double, double> hull_metrics(const Hull2D& hull);

/// Mean-centered orthonormal projection onto the top two principal axes.
struct PcaBasis {
  Row mean;                             // D
  std::array<Row, 2> axes;              // unit rows, descending eigenvalue
  std::array<double, 2> explained{};    // variance fractions of the total
};

/// Fits on an N x D matrix, N >= 2, D >= 2. Each axis's sign is fixed so its
/// largest-magnitude loading is positive.
PcaBasis fit_pca(const Matrix& data);

Vec2 pca_apply(const PcaBasis& basis, const Row& v);

struct Projection {
  std::vector<Vec2> coords;             // N
  std::array<double, 2> explained{};
};

Projection pca_project(const Matrix& data);

/// A physical-space hull and the images of its vertices in the sensor plane.
struct HullCorrespondence {
  Hull2D physical;
  std::vector<Vec2> sensor_image;       // one image per hull vertex, same order
  bool winding_preserved{false};
};

/// Core form over prealigned positions and sensor rows; `basis` projects the
/// sensor rows of the hull vertices found inside the disc.
HullCorrespondence hull_correspondence_in(const std::vector<Vec2>& positions,
                                          const Matrix& sensors, const PcaBasis& basis,
                                          Vec2 region_center, double region_radius);

/// Filters by yaw, takes the subset's rows of the whole-dataset normalized
/// readings, and relates the hull of the in-disc end positions to its
/// sensor-plane image under `basis` (expected to be fit on those same rows).
HullCorrespondence hull_correspondence(const Dataset& dataset, Vec2 region_center,
                                       double region_radius, double yaw_center,
                                       double yaw_tolerance, const PcaBasis& basis);

}  // namespace percept

#include "percept/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "percept/errors.hpp"

namespace percept {

namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool lex_less(const Vec2& a, const Vec2& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

}  // namespace

std::vector<std::size_t> convex_hull_indices(const std::vector<Vec2>& points) {
  if (points.empty()) throw invalid_input("convex hull of empty point set");
  for (const Vec2& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw invalid_input("convex hull input must be finite");
    }
  }

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lex_less(points[a], points[b]) ||
           (points[a].x == points[b].x && points[a].y == points[b].y && a < b);
  });
  // Duplicate coordinates keep the smallest record index.
  order.erase(std::unique(order.begin(), order.end(),
                          [&](std::size_t a, std::size_t b) {
                            return points[a].x == points[b].x && points[a].y == points[b].y;
                          }),
              order.end());

  const std::size_t n = order.size();
  if (n <= 2) return order;

  // Monotone chain; a non-positive turn pops, so no collinear vertex survives.
  std::vector<std::size_t> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 &&
           cross(points[hull[k - 2]], points[hull[k - 1]], points[order[i]]) <= 0.0) {
      --k;
    }
    hull[k++] = order[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower &&
           cross(points[hull[k - 2]], points[hull[k - 1]], points[order[i]]) <= 0.0) {
      --k;
    }
    hull[k++] = order[i];
  }
  hull.resize(k - 1);  // last point repeats the first
  return hull;
}

Hull2D convex_hull_2d(const std::vector<Vec2>& points) {
  Hull2D hull;
  for (std::size_t i : convex_hull_indices(points)) hull.vertices.push_back(points[i]);
  std::tie(hull.area, hull.perimeter) = hull_metrics(hull);
  return hull;
}

double signed_area(const std::vector<Vec2>& polygon) {
  const std::size_t n = polygon.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % n];
    twice += a.x * b.y - a.y * b.x;
  }
  return twice / 2.0;
}

std::pair<double, double> hull_metrics(const Hull2D& hull) {
  const std::size_t n = hull.vertices.size();
  if (n < 2) return {0.0, 0.0};
  double perimeter = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    perimeter += distance(hull.vertices[i], hull.vertices[(i + 1) % n]);
  }
  return {std::abs(signed_area(hull.vertices)), perimeter};
}

PcaBasis fit_pca(const Matrix& data) {
  const std::size_t n = data.size();
  if (n < 2) throw insufficient_data("PCA needs at least 2 rows");
  const std::size_t dim = data.front().size();
  if (dim < 2) throw invalid_input("PCA needs at least 2 columns");
  for (const Row& row : data) {
    if (row.size() != dim) throw invalid_input("PCA input has mixed row sizes");
    for (double v : row) {
      if (!std::isfinite(v)) throw invalid_input("PCA input must be finite");
    }
  }

  PcaBasis basis;
  basis.mean.assign(dim, 0.0);
  for (const Row& row : data) {
    for (std::size_t c = 0; c < dim; ++c) basis.mean[c] += row[c];
  }
  for (double& m : basis.mean) m /= static_cast<double>(n);

  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                                  static_cast<Eigen::Index>(dim));
  Eigen::VectorXd d(static_cast<Eigen::Index>(dim));
  for (const Row& row : data) {
    for (std::size_t c = 0; c < dim; ++c) {
      d[static_cast<Eigen::Index>(c)] = row[c] - basis.mean[c];
    }
    scatter.selfadjointView<Eigen::Lower>().rankUpdate(d);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(scatter);
  if (solver.info() != Eigen::Success) throw invalid_input("PCA eigensolve failed");
  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  const double trace = std::max(values.sum(), 0.0);
  for (int axis = 0; axis < 2; ++axis) {
    const auto col = static_cast<Eigen::Index>(dim) - 1 - axis;
    Eigen::VectorXd v = vectors.col(col);
    Eigen::Index peak = 0;
    v.cwiseAbs().maxCoeff(&peak);
    if (v[peak] < 0.0) v = -v;
    basis.axes[axis].assign(v.data(), v.data() + dim);
    const double lambda = std::max(values[col], 0.0);
    basis.explained[axis] = trace > 0.0 ? lambda / trace : 0.0;
  }
  return basis;
}

Vec2 pca_apply(const PcaBasis& basis, const Row& v) {
  const std::size_t dim = basis.mean.size();
  if (v.size() != dim) throw invalid_input("PCA apply: dimension mismatch");
  double u0 = 0.0;
  double u1 = 0.0;
  for (std::size_t c = 0; c < dim; ++c) {
    const double centered = v[c] - basis.mean[c];
    u0 += centered * basis.axes[0][c];
    u1 += centered * basis.axes[1][c];
  }
  return {u0, u1};
}

Projection pca_project(const Matrix& data) {
  const PcaBasis basis = fit_pca(data);
  Projection out;
  out.explained = basis.explained;
  out.coords.reserve(data.size());
  for (const Row& row : data) out.coords.push_back(pca_apply(basis, row));
  return out;
}

HullCorrespondence hull_correspondence_in(const std::vector<Vec2>& positions,
                                          const Matrix& sensors, const PcaBasis& basis,
                                          Vec2 region_center, double region_radius) {
  if (positions.size() != sensors.size()) {
    throw invalid_input("positions and sensor rows must align");
  }
  if (!(region_radius > 0.0)) throw invalid_input("region radius must be positive");

  std::vector<std::size_t> inside;
  std::vector<Vec2> local;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (distance(positions[i], region_center) <= region_radius) {
      inside.push_back(i);
      local.push_back(positions[i]);
    }
  }
  if (inside.size() < 3) throw insufficient_data("fewer than 3 records in region");

  HullCorrespondence out;
  const std::vector<std::size_t> hull = convex_hull_indices(local);
  for (std::size_t v : hull) {
    out.physical.vertices.push_back(local[v]);
    out.sensor_image.push_back(pca_apply(basis, sensors[inside[v]]));
  }
  std::tie(out.physical.area, out.physical.perimeter) = hull_metrics(out.physical);

  const double physical = signed_area(out.physical.vertices);
  const double image = signed_area(out.sensor_image);
  out.winding_preserved = physical != 0.0 && ((physical > 0.0) == (image > 0.0)) &&
                          image != 0.0;
  return out;
}

HullCorrespondence hull_correspondence(const Dataset& dataset, Vec2 region_center,
                                       double region_radius, double yaw_center,
                                       double yaw_tolerance, const PcaBasis& basis) {
  const Subset filtered = filter_by_yaw(dataset, yaw_center, yaw_tolerance);
  if (filtered.size() < 3) throw insufficient_data("fewer than 3 records after yaw filter");
  // Columns are scaled over the whole dataset, not the slice: slice-local
  // ranges reweight the near-degenerate top eigenvectors and can mirror the
  // projection plane between slices.
  const NormalizedSensors norm = normalize_sensors(dataset);
  Matrix rows;
  std::vector<Vec2> positions;
  rows.reserve(filtered.size());
  positions.reserve(filtered.size());
  for (std::size_t i = 0; i < filtered.size(); ++i) {
    rows.push_back(norm.values[filtered.rows[i]]);
    positions.push_back({filtered[i].x1, filtered[i].y1});
  }
  return hull_correspondence_in(positions, rows, basis, region_center, region_radius);
}

}  // namespace percept

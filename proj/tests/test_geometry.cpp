#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "percept/dataset.hpp"
#include "percept/errors.hpp"
#include "percept/geometry.hpp"
#include "percept/rng.hpp"
#include "support.hpp"

using namespace percept;

namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Oracle: i is a hull vertex iff some edge from i keeps every other point
// strictly on its left. Cubic, and exact for points in general position.
std::vector<std::size_t> brute_hull_vertices(const std::vector<Vec2>& points) {
  const std::size_t n = points.size();
  std::vector<std::size_t> vertices;
  for (std::size_t i = 0; i < n; ++i) {
    bool on_hull = false;
    for (std::size_t j = 0; j < n && !on_hull; ++j) {
      if (j == i) continue;
      bool all_left = true;
      for (std::size_t k = 0; k < n && all_left; ++k) {
        if (k == i || k == j) continue;
        all_left = cross(points[i], points[j], points[k]) > 0.0;
      }
      on_hull = all_left;
    }
    if (on_hull) vertices.push_back(i);
  }
  return vertices;
}

std::vector<Vec2> random_cloud(Rng& rng, std::size_t n, double span) {
  std::vector<Vec2> points(n);
  for (Vec2& p : points) {
    p.x = rng.uniform(-span, span);
    p.y = rng.uniform(-span, span);
  }
  return points;
}

// Hull membership for convex CCW polygons: left of (or on) every edge.
bool inside_hull(const std::vector<Vec2>& vertices, const Vec2& p, double slack) {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[(i + 1) % vertices.size()];
    if (cross(a, b, p) < -slack) return false;
  }
  return true;
}

Matrix identity_rows(const std::vector<Vec2>& positions) {
  Matrix rows(positions.size(), Row(16, 0.0));
  for (std::size_t i = 0; i < positions.size(); ++i) {
    rows[i][0] = positions[i].x;
    rows[i][1] = positions[i].y;
  }
  return rows;
}

}  // namespace

TEST_CASE("convex_hull_2d: unit square with interior points") {
  std::vector<Vec2> points = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  Rng rng(61);
  for (int i = 0; i < 10; ++i) points.push_back({rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)});
  const Hull2D hull = convex_hull_2d(points);
  REQUIRE(hull.vertices.size() == 4);
  CHECK(hull.vertices[0].x == 0.0);
  CHECK(hull.vertices[0].y == 0.0);
  CHECK(hull.vertices[1].x == 1.0);
  CHECK(hull.vertices[1].y == 0.0);
  CHECK(hull.vertices[2].x == 1.0);
  CHECK(hull.vertices[2].y == 1.0);
  CHECK(hull.vertices[3].x == 0.0);
  CHECK(hull.vertices[3].y == 1.0);
  CHECK(hull.area == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hull.perimeter == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("convex_hull_2d: collinear input keeps the two extremes") {
  const Hull2D hull = convex_hull_2d({{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}, {0.5, 0.5}});
  REQUIRE(hull.vertices.size() == 2);
  CHECK(hull.vertices[0].x == 0.0);
  CHECK(hull.vertices[1].x == 2.0);
  CHECK(hull.area == 0.0);
}

TEST_CASE("convex_hull_2d: degenerate sizes") {
  CHECK_THROWS_AS(convex_hull_2d({}), invalid_input);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(convex_hull_2d({{inf, 0.0}}), invalid_input);

  const Hull2D point = convex_hull_2d({{3.0, -2.0}});
  REQUIRE(point.vertices.size() == 1);
  CHECK(point.area == 0.0);
  CHECK(point.perimeter == 0.0);

  const Hull2D segment = convex_hull_2d({{1.0, 0.0}, {0.0, 0.0}});
  REQUIRE(segment.vertices.size() == 2);
  CHECK(segment.vertices[0].x == 0.0);  // lexicographic start
  CHECK(segment.perimeter == doctest::Approx(2.0).epsilon(1e-12));

  const Hull2D repeated = convex_hull_2d({{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}});
  CHECK(repeated.vertices.size() == 1);
}

TEST_CASE("convex_hull_indices: matches the cubic oracle on random clouds") {
  Rng rng(67);
  for (int instance = 0; instance < 25; ++instance) {
    const auto points = random_cloud(rng, 200, 5.0);
    std::vector<std::size_t> got = convex_hull_indices(points);
    std::vector<std::size_t> want = brute_hull_vertices(points);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    CHECK(got == want);
  }
}

TEST_CASE("convex_hull_2d: CCW order, idempotence, containment") {
  Rng rng(71);
  for (int instance = 0; instance < 10; ++instance) {
    const auto points = random_cloud(rng, 300, 4.0);
    const Hull2D hull = convex_hull_2d(points);
    REQUIRE(hull.vertices.size() >= 3);

    CHECK(signed_area(hull.vertices) > 0.0);

    // Starts at the lexicographically smallest vertex.
    for (std::size_t i = 1; i < hull.vertices.size(); ++i) {
      const Vec2& v = hull.vertices[i];
      const Vec2& first = hull.vertices[0];
      CHECK((first.x < v.x || (first.x == v.x && first.y <= v.y)));
    }

    const Hull2D again = convex_hull_2d(hull.vertices);
    REQUIRE(again.vertices.size() == hull.vertices.size());
    for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
      CHECK(again.vertices[i].x == hull.vertices[i].x);
      CHECK(again.vertices[i].y == hull.vertices[i].y);
    }

    for (const Vec2& p : points) CHECK(inside_hull(hull.vertices, p, 1e-9));
  }
}

TEST_CASE("convex_hull_2d: area agrees with Monte Carlo containment") {
  Rng rng(73);
  const auto points = random_cloud(rng, 40, 3.0);
  const Hull2D hull = convex_hull_2d(points);
  double lo_x = 3.0, hi_x = -3.0, lo_y = 3.0, hi_y = -3.0;
  for (const Vec2& v : hull.vertices) {
    lo_x = std::min(lo_x, v.x);
    hi_x = std::max(hi_x, v.x);
    lo_y = std::min(lo_y, v.y);
    hi_y = std::max(hi_y, v.y);
  }
  const double box = (hi_x - lo_x) * (hi_y - lo_y);
  const int samples = 100000;
  int hits = 0;
  for (int i = 0; i < samples; ++i) {
    const Vec2 p{rng.uniform(lo_x, hi_x), rng.uniform(lo_y, hi_y)};
    if (inside_hull(hull.vertices, p, 0.0)) ++hits;
  }
  const double estimate = box * hits / samples;
  CHECK(hull.area == doctest::Approx(estimate).epsilon(0.02));
}

TEST_CASE("signed_area: orientation signs") {
  const std::vector<Vec2> ccw = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  CHECK(signed_area(ccw) == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<Vec2> cw(ccw.rbegin(), ccw.rend());
  CHECK(signed_area(cw) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("hull_metrics: worked shapes") {
  const Hull2D square = convex_hull_2d({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
  const auto [sq_area, sq_perim] = hull_metrics(square);
  CHECK(sq_area == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sq_perim == doctest::Approx(4.0).epsilon(1e-12));

  const Hull2D triangle = convex_hull_2d({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
  const auto [tri_area, tri_perim] = hull_metrics(triangle);
  CHECK(tri_area == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(tri_perim == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));

  // A two-vertex hull walks its segment out and back.
  const Hull2D segment = convex_hull_2d({{0.0, 0.0}, {1.0, 0.0}});
  const auto [seg_area, seg_perim] = hull_metrics(segment);
  CHECK(seg_area == 0.0);
  CHECK(seg_perim == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("fit_pca: diagonal line collapses onto one axis") {
  Matrix data;
  for (int i = 0; i <= 100; ++i) {
    const double t = -2.0 + 0.04 * i;
    data.push_back({t, t});
  }
  const PcaBasis basis = fit_pca(data);
  CHECK(basis.explained[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(basis.explained[1] == doctest::Approx(0.0).epsilon(1e-9));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(basis.axes[0][0] == doctest::Approx(s).epsilon(1e-9));
  CHECK(basis.axes[0][1] == doctest::Approx(s).epsilon(1e-9));
  for (const Row& row : data) {
    const Vec2 p = pca_apply(basis, row);
    CHECK(std::abs(p.y) < 1e-9);
  }
}

TEST_CASE("fit_pca: repeated points have zero explained variance") {
  const Matrix data = {{3.0, 1.0, 2.0}, {3.0, 1.0, 2.0}};
  const PcaBasis basis = fit_pca(data);
  CHECK(basis.explained[0] == 0.0);
  CHECK(basis.explained[1] == 0.0);
  const Vec2 p = pca_apply(basis, {3.0, 1.0, 2.0});
  CHECK(p.x == 0.0);
  CHECK(p.y == 0.0);
}

TEST_CASE("fit_pca: axes are orthonormal with descending explained variance") {
  Rng rng(79);
  for (int instance = 0; instance < 10; ++instance) {
    Matrix data(50, Row(16, 0.0));
    for (Row& row : data) {
      for (double& v : row) v = rng.uniform(0.0, 1000.0);
    }
    const PcaBasis basis = fit_pca(data);
    double n0 = 0.0, n1 = 0.0, dot = 0.0;
    for (std::size_t d = 0; d < 16; ++d) {
      n0 += basis.axes[0][d] * basis.axes[0][d];
      n1 += basis.axes[1][d] * basis.axes[1][d];
      dot += basis.axes[0][d] * basis.axes[1][d];
    }
    CHECK(n0 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(n1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(dot) < 1e-9);
    CHECK(basis.explained[0] >= basis.explained[1]);
    CHECK(basis.explained[1] >= 0.0);
    CHECK(basis.explained[0] + basis.explained[1] <= 1.0 + 1e-12);

    // Sign convention: each axis's largest-magnitude loading is positive.
    for (const Row& axis : basis.axes) {
      double best = 0.0;
      for (double v : axis) {
        if (std::abs(v) > std::abs(best)) best = v;
      }
      CHECK(best > 0.0);
    }
  }
}

TEST_CASE("pca_apply: projection never expands pairwise distances") {
  Rng rng(83);
  Matrix data(200, Row(16, 0.0));
  for (Row& row : data) {
    for (double& v : row) v = rng.uniform(-1.0, 1.0);
  }
  const PcaBasis basis = fit_pca(data);
  for (int pair = 0; pair < 1000; ++pair) {
    const Row& a = data[rng.below(data.size())];
    const Row& b = data[rng.below(data.size())];
    double original = 0.0;
    for (std::size_t d = 0; d < 16; ++d) original += (a[d] - b[d]) * (a[d] - b[d]);
    const Vec2 pa = pca_apply(basis, a);
    const Vec2 pb = pca_apply(basis, b);
    const double projected = (pa.x - pb.x) * (pa.x - pb.x) + (pa.y - pb.y) * (pa.y - pb.y);
    CHECK(projected <= original + 1e-9);
  }
}

TEST_CASE("fit_pca and pca_apply: input validation") {
  CHECK_THROWS_AS(fit_pca({{1.0, 2.0}}), insufficient_data);
  CHECK_THROWS_AS(fit_pca({{1.0}, {2.0}}), invalid_input);
  CHECK_THROWS_AS(fit_pca({{1.0, 2.0}, {1.0}}), invalid_input);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fit_pca({{1.0, nan}, {0.0, 0.0}}), invalid_input);
  const PcaBasis basis = fit_pca({{0.0, 0.0}, {1.0, 1.0}});
  CHECK_THROWS_AS(pca_apply(basis, {1.0, 2.0, 3.0}), invalid_input);
}

TEST_CASE("pca_project: convenience form matches fit plus apply") {
  Rng rng(89);
  Matrix data(40, Row(4, 0.0));
  for (Row& row : data) {
    for (double& v : row) v = rng.uniform(0.0, 10.0);
  }
  const Projection proj = pca_project(data);
  const PcaBasis basis = fit_pca(data);
  REQUIRE(proj.coords.size() == data.size());
  CHECK(proj.explained[0] == basis.explained[0]);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Vec2 p = pca_apply(basis, data[i]);
    CHECK(proj.coords[i].x == p.x);
    CHECK(proj.coords[i].y == p.y);
  }
}

TEST_CASE("hull_correspondence_in: identity embedding preserves the hull exactly") {
  Rng rng(97);
  std::vector<Vec2> positions(300);
  for (Vec2& p : positions) {
    p.x = rng.uniform(-4.0, 4.0);
    p.y = rng.uniform(-2.0, 2.0);
  }
  const Matrix sensors = identity_rows(positions);
  const PcaBasis basis = fit_pca(sensors);
  const HullCorrespondence corr =
      hull_correspondence_in(positions, sensors, basis, {0.0, 0.0}, 1.8);

  CHECK(corr.winding_preserved);
  REQUIRE(corr.sensor_image.size() == corr.physical.vertices.size());
  REQUIRE(corr.physical.vertices.size() >= 3);

  // The map is a rigid translation up to axis sign, so consecutive edge
  // lengths match exactly.
  const auto& verts = corr.physical.vertices;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const std::size_t j = (i + 1) % verts.size();
    const double physical = std::hypot(verts[j].x - verts[i].x, verts[j].y - verts[i].y);
    const double image = std::hypot(corr.sensor_image[j].x - corr.sensor_image[i].x,
                                    corr.sensor_image[j].y - corr.sensor_image[i].y);
    CHECK(image == doctest::Approx(physical).epsilon(1e-9));
  }
  CHECK(std::abs(std::abs(signed_area(corr.sensor_image)) - corr.physical.area) < 1e-9);
}

TEST_CASE("hull_correspondence_in: swapping the plane axes flips the winding") {
  Rng rng(101);
  std::vector<Vec2> positions(200);
  for (Vec2& p : positions) {
    p.x = rng.uniform(-4.0, 4.0);
    p.y = rng.uniform(-2.0, 2.0);
  }
  const Matrix sensors = identity_rows(positions);
  PcaBasis basis = fit_pca(sensors);
  std::swap(basis.axes[0], basis.axes[1]);  // mirror the projection plane
  const HullCorrespondence corr =
      hull_correspondence_in(positions, sensors, basis, {0.0, 0.0}, 1.8);
  CHECK_FALSE(corr.winding_preserved);
}

TEST_CASE("hull_correspondence_in: validation and insufficient regions") {
  const std::vector<Vec2> positions = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  const Matrix sensors = identity_rows(positions);
  const PcaBasis basis = fit_pca(sensors);
  CHECK_THROWS_AS(hull_correspondence_in(positions, sensors, basis, {0.0, 0.0}, 0.0),
                  invalid_input);
  CHECK_THROWS_AS(hull_correspondence_in(positions, sensors, basis, {50.0, 50.0}, 1.0),
                  insufficient_data);
  const Matrix short_rows(2, Row(16, 0.0));
  CHECK_THROWS_AS(hull_correspondence_in(positions, short_rows, basis, {0.0, 0.0}, 1.0),
                  invalid_input);
}

TEST_CASE("hull_correspondence: dataset form filters yaw and normalizes once") {
  // y is range-matched but variance-squeezed so the normalized columns keep a
  // clear principal-axis order (plain min-max would equalize two uniforms).
  Rng seed_rng(103);
  std::vector<LogRecord> records(5000);
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].index = i;
    records[i].x1 = seed_rng.uniform(-4.0, 4.0);
    records[i].y1 = seed_rng.uniform(-2.0, 2.0) * seed_rng.unit();
    records[i].ds[0] = records[i].x1;
    records[i].ds[1] = records[i].y1;
  }
  const Dataset data(records);
  const NormalizedSensors norm = normalize_sensors(data);
  const PcaBasis basis = fit_pca(norm.values);
  const HullCorrespondence corr =
      hull_correspondence(data, {0.0, 0.0}, 1.5, 0.0, kPi, basis);
  CHECK(corr.winding_preserved);
  REQUIRE(corr.physical.vertices.size() >= 3);
  // All hull vertices lie inside the requested disc.
  for (const Vec2& v : corr.physical.vertices) {
    CHECK(std::hypot(v.x, v.y) <= 1.5 + 1e-12);
  }
  CHECK_THROWS_AS(hull_correspondence(data, {100.0, 100.0}, 1.0, 0.0, kPi, basis),
                  insufficient_data);
  // A yaw window matching nothing leaves fewer than three records.
  CHECK_THROWS_AS(hull_correspondence(data, {0.0, 0.0}, 1.5, 2.0, 0.001, basis),
                  insufficient_data);
}

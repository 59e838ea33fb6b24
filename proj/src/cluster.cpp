#include "percept/cluster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "percept/errors.hpp"
#include "percept/rng.hpp"

namespace percept {

namespace {

double sq_dist(const Row& a, const Row& b) {
  double acc = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double d = a[c] - b[c];
    acc += d * d;
  }
  return acc;
}

/// k-means++: each next center is drawn proportionally to the squared
/// distance from the nearest already-chosen center.
Matrix seed_centroids(const Matrix& data, std::size_t k, Rng& rng) {
  const std::size_t n = data.size();
  Matrix centroids;
  centroids.reserve(k);
  centroids.push_back(data[rng.below(n)]);

  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<double> cumulative(n);
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      best[i] = std::min(best[i], sq_dist(data[i], centroids.back()));
      total += best[i];
      cumulative[i] = total;
    }
    std::size_t pick;
    if (total > 0.0) {
      const double u = rng.uniform(0.0, total);
      pick = static_cast<std::size_t>(
          std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
      pick = std::min(pick, n - 1);
    } else {
      pick = rng.below(n);  // all remaining mass on chosen points
    }
    centroids.push_back(data[pick]);
  }
  return centroids;
}

struct LloydResult {
  Matrix centroids;
  std::vector<std::size_t> assignments;
  double inertia{0.0};
};

void assign_all(const Matrix& data, const Matrix& centroids,
                std::vector<std::size_t>& assignments, std::vector<double>& dist) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::size_t best = 0;
    double best_d = sq_dist(data[i], centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
      const double d = sq_dist(data[i], centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    assignments[i] = best;
    dist[i] = best_d;
  }
}

LloydResult lloyd(const Matrix& data, std::size_t k, std::size_t max_iter, double tol,
                  Rng& rng) {
  const std::size_t n = data.size();
  const std::size_t dim = data.front().size();
  Matrix centroids = seed_centroids(data, k, rng);
  std::vector<std::size_t> assignments(n);
  std::vector<double> dist(n);
  std::vector<std::size_t> counts(k);

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    assign_all(data, centroids, assignments, dist);

    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t a : assignments) ++counts[a];

    // An empty cluster steals the point farthest from its current centroid;
    // clusters that would be emptied by the theft are left alone.
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      std::size_t farthest = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[assignments[i]] <= 1) continue;
        if (dist[i] > far_d) {
          far_d = dist[i];
          farthest = i;
        }
      }
      if (farthest == n) continue;
      --counts[assignments[farthest]];
      assignments[farthest] = c;
      counts[c] = 1;
      dist[farthest] = 0.0;
    }

    Matrix next(k, Row(dim, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t col = 0; col < dim; ++col) next[assignments[i]][col] += data[i][col];
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        next[c] = centroids[c];
        continue;
      }
      for (double& v : next[c]) v /= static_cast<double>(counts[c]);
      shift = std::max(shift, std::sqrt(sq_dist(next[c], centroids[c])));
    }
    centroids = std::move(next);
    if (shift < tol) break;
  }

  // Final pass pins assignments to the returned centroids.
  assign_all(data, centroids, assignments, dist);
  LloydResult result;
  result.centroids = std::move(centroids);
  result.assignments = std::move(assignments);
  for (double d : dist) result.inertia += d;
  return result;
}

}  // namespace

ClusterModel kmeans(const Matrix& data, std::size_t k, std::uint64_t seed,
                    std::size_t restarts, std::size_t max_iter, double tol) {
  const std::size_t n = data.size();
  if (k < 1 || k > n) throw invalid_input("kmeans: k out of range");
  if (restarts < 1) throw invalid_input("kmeans: restarts must be >= 1");
  const std::size_t dim = data.front().size();
  if (dim == 0) throw invalid_input("kmeans: zero-dimensional rows");
  for (const Row& row : data) {
    if (row.size() != dim) throw invalid_input("kmeans: mixed row sizes");
    for (double v : row) {
      if (!std::isfinite(v)) throw invalid_input("kmeans: non-finite value");
    }
  }

  Rng rng(seed);
  LloydResult best;
  bool have = false;
  for (std::size_t r = 0; r < restarts; ++r) {
    LloydResult run = lloyd(data, k, max_iter, tol, rng);
    if (!have || run.inertia < best.inertia) {
      best = std::move(run);
      have = true;
    }
  }

  ClusterModel model;
  model.k = k;
  model.centroids = std::move(best.centroids);
  model.assignments = std::move(best.assignments);
  model.inertia = best.inertia;
  return model;
}

ElbowCurve elbow_select(const Matrix& data, const std::vector<std::size_t>& k_range,
                        std::uint64_t seed, std::size_t restarts) {
  if (k_range.empty()) throw invalid_input("elbow: empty k range");
  for (std::size_t i = 1; i < k_range.size(); ++i) {
    if (k_range[i] <= k_range[i - 1]) throw invalid_input("elbow: k range must ascend");
  }

  ElbowCurve curve;
  curve.ks = k_range;
  for (std::size_t k : k_range) {
    curve.inertia.push_back(kmeans(data, k, seed, restarts).inertia);
  }
  if (k_range.size() == 1) {
    curve.selected_k = k_range.front();
    return curve;
  }

  const auto [lo_i, hi_i] = std::minmax_element(curve.inertia.begin(), curve.inertia.end());
  const double k_lo = static_cast<double>(k_range.front());
  const double k_span = static_cast<double>(k_range.back()) - k_lo;
  const double i_lo = *lo_i;
  const double i_span = *hi_i - i_lo;
  auto scaled = [&](std::size_t idx) -> Vec2 {
    const double x = (static_cast<double>(k_range[idx]) - k_lo) / k_span;
    const double y = i_span > 0.0 ? (curve.inertia[idx] - i_lo) / i_span : 0.0;
    return {x, y};
  };

  const Vec2 a = scaled(0);
  const Vec2 b = scaled(k_range.size() - 1);
  const double len = distance(a, b);
  double best_d = -1.0;
  for (std::size_t idx = 0; idx < k_range.size(); ++idx) {
    const Vec2 p = scaled(idx);
    const double d =
        std::abs((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)) / len;
    if (d > best_d) {
      best_d = d;
      curve.selected_k = k_range[idx];
    }
  }
  return curve;
}

Wall nearest_wall(const Arena& arena, double x, double y) {
  const double h = arena.half();
  const double d[4] = {h - y, h - x, y + h, x + h};  // N, E, S, W
  int best = 0;
  for (int w = 1; w < 4; ++w) {
    if (d[w] < d[best]) best = w;
  }
  return static_cast<Wall>(best);
}

double wall_purity(const ClusterModel& model, const Subset& records, const Arena& arena) {
  const std::size_t n = records.size();
  if (model.assignments.size() != n) {
    throw invalid_input("wall_purity: assignments do not align with records");
  }
  if (n == 0) throw invalid_input("wall_purity: empty record set");

  // counts[cluster][wall]
  std::vector<std::array<std::size_t, 4>> counts(model.k, {0, 0, 0, 0});
  for (std::size_t i = 0; i < n; ++i) {
    const Wall w = nearest_wall(arena, records[i].x1, records[i].y1);
    ++counts[model.assignments[i]][static_cast<int>(w)];
  }
  std::size_t matched = 0;
  for (const auto& per_wall : counts) {
    matched += *std::max_element(per_wall.begin(), per_wall.end());
  }
  return static_cast<double>(matched) / static_cast<double>(n);
}

double wall_purity(const ClusterModel& model, const Dataset& dataset, const Arena& arena) {
  return wall_purity(model, Subset::all(dataset), arena);
}

}  // namespace percept

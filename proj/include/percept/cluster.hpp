#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "percept/dataset.hpp"
#include "percept/sim.hpp"
#include "percept/types.hpp"

namespace percept {

/// K-means result. Every assignment is the argmin-distance centroid (ties go
/// to the lower centroid id) and inertia matches the assignments.
struct ClusterModel {
  std::size_t k{0};
  Matrix centroids;                       // k x D
  std::vector<std::size_t> assignments;   // one per input row
  double inertia{0.0};
};

/// Best of `restarts` Lloyd runs with k-means++ seeding; restarts share one
/// generator seeded from `seed`, so results are reproducible.
ClusterModel kmeans(const Matrix& data, std::size_t k, std::uint64_t seed,
                    std::size_t restarts = 10, std::size_t max_iter = 300,
                    double tol = 1e-6);

struct ElbowCurve {
  std::vector<std::size_t> ks;        // ascending
  std::vector<double> inertia;        // best of restarts per k
  std::size_t selected_k{0};
};

/// Picks the k whose min-max-scaled (k, inertia) point lies farthest from the
/// chord joining the curve's endpoints; ties take the smaller k.
ElbowCurve elbow_select(const Matrix& data, const std::vector<std::size_t>& k_range,
                        std::uint64_t seed, std::size_t restarts = 10);

enum class Wall { north, east, south, west };

/// Wall with the smallest distance from (x, y); ties resolve N, E, S, W.
Wall nearest_wall(const Arena& arena, double x, double y);

/// Fraction of records whose cluster's dominant nearest-wall label matches
/// their own: (1/N) sum over clusters of max wall count.
double wall_purity(const ClusterModel& model, const Subset& records, const Arena& arena);
double wall_purity(const ClusterModel& model, const Dataset& dataset, const Arena& arena);

}  // namespace percept

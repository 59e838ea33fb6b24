#pragma once

#include <cstdint>
#include <vector>

#include "percept/dataset.hpp"
#include "percept/rng.hpp"
#include "percept/types.hpp"

namespace percept {

struct Neighbor {
  std::size_t index{0};
  double distance{0.0};
};

/// Balanced KD-tree over a fixed point table. Queries are exact: results
/// match a linear scan, with distance ties broken by lower point index.
class SpatialIndex {
 public:
  static SpatialIndex build(Matrix points);

  std::size_t size() const { return count_; }
  std::size_t dimension() const { return dim_; }

  /// The k nearest points by Euclidean distance, ascending, ties by index.
  std::vector<Neighbor> knn(const Row& query, std::size_t k) const;

 private:
  struct Node {
    int axis{-1};  // -1 marks a leaf
    double split{0.0};
    std::int32_t left{-1};
    std::int32_t right{-1};
    std::uint32_t begin{0};
    std::uint32_t end{0};
  };

  SpatialIndex() = default;
  std::int32_t build_node(std::uint32_t begin, std::uint32_t end);
  const double* point(std::size_t i) const { return flat_.data() + i * dim_; }

  std::size_t count_{0};
  std::size_t dim_{0};
  std::vector<double> flat_;        // row-major point storage
  std::vector<std::uint32_t> perm_; // point ids, partitioned by the tree
  std::vector<Node> nodes_;
  std::int32_t root_{-1};
};

/// How tightly sensor-space neighborhoods sit in physical space.
/// ratio ~ 0 means sensor proximity implies physical proximity; ratio ~ 1
/// means sensor neighborhoods are no tighter than random record pairs.
struct LocalityReport {
  std::size_t k{0};
  std::vector<std::size_t> anchors;
  std::vector<std::vector<std::size_t>> neighbors;  // per anchor, k record ids
  std::vector<double> anchor_mean_distance;         // per anchor, meters
  double mean_neighbor_distance{0.0};  // mean of the per-anchor means
  double baseline_distance{0.0};       // mean over random record pairs
  double ratio{0.0};
};

/// Samples n_anchors records (without replacement), finds each anchor's k
/// nearest records in perceptual space (anchor excluded), and averages their
/// physical distances to the anchor's end position. The baseline is the mean
/// physical distance over n_anchors*k random record pairs from the same
/// generator. Perceptual space is the 16 min-max-normalized readings plus the
/// min-max-normalized yaw; yaw is required because the square arena maps each
/// pose and its three quarter-turn twins to identical readings.
LocalityReport locality_ratio(const Dataset& dataset, std::size_t k, std::size_t n_anchors,
                              Rng& rng);

}  // namespace percept

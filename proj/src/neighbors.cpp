#include "percept/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "percept/errors.hpp"

namespace percept {

namespace {

constexpr std::uint32_t kLeafSize = 16;

double sq_dist(const double* a, const double* b, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

using Candidate = std::pair<double, std::size_t>;  // (squared distance, point id)

}  // namespace

SpatialIndex SpatialIndex::build(Matrix points) {
  if (points.empty()) throw invalid_input("SpatialIndex: empty point set");
  SpatialIndex index;
  index.count_ = points.size();
  index.dim_ = points.front().size();
  if (index.dim_ == 0) throw invalid_input("SpatialIndex: zero-dimensional points");
  index.flat_.reserve(index.count_ * index.dim_);
  for (const Row& p : points) {
    if (p.size() != index.dim_) throw invalid_input("SpatialIndex: mixed dimensions");
    for (double v : p) {
      if (!std::isfinite(v)) throw invalid_input("SpatialIndex: non-finite coordinate");
      index.flat_.push_back(v);
    }
  }
  index.perm_.resize(index.count_);
  std::iota(index.perm_.begin(), index.perm_.end(), 0u);
  index.nodes_.reserve(2 * index.count_ / kLeafSize + 2);
  index.root_ = index.build_node(0, static_cast<std::uint32_t>(index.count_));
  return index;
}

std::int32_t SpatialIndex::build_node(std::uint32_t begin, std::uint32_t end) {
  Node node;
  node.begin = begin;
  node.end = end;
  const std::uint32_t n = end - begin;
  if (n <= kLeafSize) {
    nodes_.push_back(node);
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  // Split on the axis with the widest spread over this subset.
  int best_axis = 0;
  double best_spread = -1.0;
  for (std::size_t axis = 0; axis < dim_; ++axis) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::uint32_t i = begin; i < end; ++i) {
      const double v = point(perm_[i])[axis];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_axis = static_cast<int>(axis);
    }
  }

  const std::uint32_t mid = begin + n / 2;
  std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double va = point(a)[best_axis];
                     const double vb = point(b)[best_axis];
                     return va < vb || (va == vb && a < b);
                   });
  node.axis = best_axis;
  node.split = point(perm_[mid])[best_axis];

  const auto self = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(node);
  const std::int32_t left = build_node(begin, mid);
  const std::int32_t right = build_node(mid, end);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

std::vector<Neighbor> SpatialIndex::knn(const Row& query, std::size_t k) const {
  if (query.size() != dim_) throw invalid_input("knn: query dimension mismatch");
  if (k < 1 || k > count_) throw invalid_input("knn: k out of range");
  for (double v : query) {
    if (!std::isfinite(v)) throw invalid_input("knn: non-finite query");
  }

  // Max-heap on (squared distance, id); the root is the current worst keeper.
  std::vector<Candidate> heap;
  heap.reserve(k + 1);
  auto worse = [](const Candidate& a, const Candidate& b) { return a < b; };

  auto offer = [&](std::size_t id) {
    const Candidate cand{sq_dist(point(id), query.data(), dim_), id};
    if (heap.size() < k) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end(), worse);
    } else if (cand < heap.front()) {
      std::pop_heap(heap.begin(), heap.end(), worse);
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end(), worse);
    }
  };

  // Depth-first descent, near side first. A subtree is skipped only when its
  // splitting plane is strictly farther than the worst kept candidate, so
  // equal-distance ties are still visited and resolved by index.
  auto visit = [&](auto&& self, std::int32_t node_id) -> void {
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) offer(perm_[i]);
      return;
    }
    const double diff = query[node.axis] - node.split;
    const std::int32_t near = diff < 0.0 ? node.left : node.right;
    const std::int32_t far = diff < 0.0 ? node.right : node.left;
    self(self, near);
    if (heap.size() < k || diff * diff <= heap.front().first) self(self, far);
  };
  visit(visit, root_);

  std::sort(heap.begin(), heap.end());
  std::vector<Neighbor> result;
  result.reserve(k);
  for (const auto& [d2, id] : heap) result.push_back({id, std::sqrt(d2)});
  return result;
}

LocalityReport locality_ratio(const Dataset& dataset, std::size_t k, std::size_t n_anchors,
                              Rng& rng) {
  const std::size_t n = dataset.size();
  if (k < 1) throw invalid_input("locality_ratio: k must be >= 1");
  if (n <= k) throw invalid_input("locality_ratio: dataset must hold more than k records");
  if (n_anchors < 1 || n_anchors > n) {
    throw invalid_input("locality_ratio: n_anchors out of range");
  }

  // Perceptual features: normalized readings plus normalized yaw. Readings
  // alone alias each pose with its three quarter-turn twins (the arena is a
  // square), which would scatter every neighborhood across four sites.
  NormalizedSensors norm = normalize_sensors(dataset);
  double yaw_lo = dataset[0].yaw;
  double yaw_hi = dataset[0].yaw;
  for (std::size_t i = 1; i < n; ++i) {
    yaw_lo = std::min(yaw_lo, dataset[i].yaw);
    yaw_hi = std::max(yaw_hi, dataset[i].yaw);
  }
  const double yaw_span = yaw_hi - yaw_lo;
  for (std::size_t i = 0; i < n; ++i) {
    norm.values[i].push_back(yaw_span > 0.0 ? (dataset[i].yaw - yaw_lo) / yaw_span : 0.0);
  }
  const SpatialIndex index = SpatialIndex::build(norm.values);

  // Partial Fisher-Yates, then sorted so the scan order is index order.
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < n_anchors; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  LocalityReport report;
  report.k = k;
  report.anchors.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_anchors));
  std::sort(report.anchors.begin(), report.anchors.end());

  double total = 0.0;
  for (const std::size_t anchor : report.anchors) {
    auto found = index.knn(norm.values[anchor], k + 1);
    const auto self = std::find_if(found.begin(), found.end(),
                                   [&](const Neighbor& nb) { return nb.index == anchor; });
    if (self != found.end()) {
      found.erase(self);
    } else {
      found.pop_back();
    }
    const Vec2 at{dataset[anchor].x1, dataset[anchor].y1};
    double acc = 0.0;
    std::vector<std::size_t> ids;
    for (const Neighbor& nb : found) {
      acc += distance(at, {dataset[nb.index].x1, dataset[nb.index].y1});
      ids.push_back(nb.index);
    }
    report.neighbors.push_back(std::move(ids));
    const double mean = acc / static_cast<double>(k);
    report.anchor_mean_distance.push_back(mean);
    total += mean;
  }
  report.mean_neighbor_distance = total / static_cast<double>(n_anchors);

  double base = 0.0;
  const std::size_t pairs = n_anchors * k;
  for (std::size_t p = 0; p < pairs; ++p) {
    const auto i = static_cast<std::size_t>(rng.below(n));
    const auto j = static_cast<std::size_t>(rng.below(n));
    base += distance({dataset[i].x1, dataset[i].y1}, {dataset[j].x1, dataset[j].y1});
  }
  report.baseline_distance = base / static_cast<double>(pairs);
  report.ratio = report.baseline_distance > 0.0
                     ? report.mean_neighbor_distance / report.baseline_distance
                     : 0.0;
  return report;
}

}  // namespace percept

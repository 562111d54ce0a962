#pragma once

#include <cstddef>
#include <vector>

#include "radarloc/geometry.hpp"

namespace radarloc {

/// Static 2D kd-tree answering exact nearest-neighbour and radius queries.
class KdTree2 {
 public:
  KdTree2() = default;
  explicit KdTree2(std::span<const Point2> points);

  struct Neighbor {
    std::size_t index;  // into the point span given at construction
    double squared_distance;
  };

  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }

  /// Exact nearest neighbour. Precondition: !empty().
  Neighbor nearest(Point2 q) const;

  /// True iff some point lies at Euclidean distance strictly below `radius`.
  /// Agrees bit-for-bit with `sqrt(nearest(q).squared_distance) < radius`.
  bool any_within(Point2 q, double radius) const;

  /// Indices of all points with distance <= radius, ascending.
  std::vector<std::size_t> radius_search(Point2 q, double radius) const;

 private:
  struct Node {
    // Leaf when left < 0; [begin, end) then indexes points_.
    int left = -1;
    int right = -1;
    int dim = 0;
    double split = 0.0;
    std::size_t begin = 0;
    std::size_t end = 0;
  };

  int build(std::size_t begin, std::size_t end);
  void nearest_rec(int node, Point2 q, Neighbor& best) const;
  bool any_within_rec(int node, Point2 q, double bound_sq, double radius) const;
  void radius_rec(int node, Point2 q, double r2, std::vector<std::size_t>& out) const;

  static constexpr std::size_t kLeafSize = 8;

  std::vector<Point2> points_;        // reordered copy, leaf-contiguous
  std::vector<std::size_t> original_;  // points_[i] came from input index original_[i]
  std::vector<Node> nodes_;
};

/// Immutable prior map: the global-frame points plus an exact NN index.
class PointMap {
 public:
  /// Throws DataError on an empty cloud.
  explicit PointMap(PointCloud2 points);

  const PointCloud2& cloud() const { return cloud_; }
  std::size_t size() const { return cloud_.size(); }
  const KdTree2& index() const { return index_; }

  /// Exact minimum Euclidean distance from p to any map point.
  double nearest_distance(Point2 p) const;

  /// A point is matched when its nearest map distance is strictly below d_th.
  bool is_matched(Point2 p, double d_th) const { return index_.any_within(p, d_th); }

  /// Number of scan points (taken as already in the map frame) that match.
  std::size_t matched_count(const PointCloud2& scan, double d_th) const;

  Point2 min_corner() const { return min_; }
  Point2 max_corner() const { return max_; }

 private:
  PointCloud2 cloud_;
  KdTree2 index_;
  Point2 min_;
  Point2 max_;
};

/// Convenience wrapper around the PointMap constructor.
PointMap build_index(PointCloud2 points);

}  // namespace radarloc

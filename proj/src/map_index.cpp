#include "radarloc/map_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "radarloc/error.hpp"

namespace radarloc {

namespace {

inline double coord(Point2 p, int dim) { return dim == 0 ? p.x : p.y; }

inline double sq_dist(Point2 a, Point2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace

KdTree2::KdTree2(std::span<const Point2> points) : points_(points.begin(), points.end()) {
  original_.resize(points_.size());
  std::iota(original_.begin(), original_.end(), std::size_t{0});
  if (points_.empty()) return;
  nodes_.reserve(2 * (points_.size() / kLeafSize + 1));
  build(0, points_.size());
}

int KdTree2::build(std::size_t begin, std::size_t end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({});
  nodes_[id].begin = begin;
  nodes_[id].end = end;
  if (end - begin <= kLeafSize) return id;

  Point2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Point2 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  for (std::size_t i = begin; i < end; ++i) {
    lo.x = std::min(lo.x, points_[i].x);
    lo.y = std::min(lo.y, points_[i].y);
    hi.x = std::max(hi.x, points_[i].x);
    hi.y = std::max(hi.y, points_[i].y);
  }
  const int dim = (hi.x - lo.x) >= (hi.y - lo.y) ? 0 : 1;
  const std::size_t mid = begin + (end - begin) / 2;

  // Partition a permutation so points_ and original_ move together.
  std::vector<std::size_t> perm(end - begin);
  std::iota(perm.begin(), perm.end(), begin);
  std::nth_element(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(mid - begin),
                   perm.end(), [&](std::size_t a, std::size_t b) {
                     return coord(points_[a], dim) < coord(points_[b], dim);
                   });
  std::vector<Point2> pts(perm.size());
  std::vector<std::size_t> orig(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    pts[k] = points_[perm[k]];
    orig[k] = original_[perm[k]];
  }
  std::copy(pts.begin(), pts.end(), points_.begin() + static_cast<std::ptrdiff_t>(begin));
  std::copy(orig.begin(), orig.end(), original_.begin() + static_cast<std::ptrdiff_t>(begin));

  const double split = coord(points_[mid], dim);
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[id].dim = dim;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

KdTree2::Neighbor KdTree2::nearest(Point2 q) const {
  Neighbor best{0, std::numeric_limits<double>::infinity()};
  nearest_rec(0, q, best);
  best.index = original_[best.index];
  return best;
}

void KdTree2::nearest_rec(int id, Point2 q, Neighbor& best) const {
  const Node& n = nodes_[id];
  if (n.left < 0) {
    for (std::size_t i = n.begin; i < n.end; ++i) {
      const double d = sq_dist(q, points_[i]);
      if (d < best.squared_distance) best = {i, d};
    }
    return;
  }
  const double diff = coord(q, n.dim) - n.split;
  const int near = diff < 0.0 ? n.left : n.right;
  const int far = diff < 0.0 ? n.right : n.left;
  nearest_rec(near, q, best);
  if (diff * diff <= best.squared_distance) nearest_rec(far, q, best);
}

bool KdTree2::any_within(Point2 q, double radius) const {
  if (points_.empty() || !(radius > 0.0)) return false;
  // Any point whose squared distance exceeds this bound has sqrt() >= radius.
  const double bound_sq = radius * radius * (1.0 + 1e-9);
  return any_within_rec(0, q, bound_sq, radius);
}

bool KdTree2::any_within_rec(int id, Point2 q, double bound_sq, double radius) const {
  const Node& n = nodes_[id];
  if (n.left < 0) {
    for (std::size_t i = n.begin; i < n.end; ++i) {
      const double d = sq_dist(q, points_[i]);
      if (d < bound_sq && std::sqrt(d) < radius) return true;
    }
    return false;
  }
  const double diff = coord(q, n.dim) - n.split;
  const int near = diff < 0.0 ? n.left : n.right;
  const int far = diff < 0.0 ? n.right : n.left;
  if (any_within_rec(near, q, bound_sq, radius)) return true;
  return diff * diff < bound_sq && any_within_rec(far, q, bound_sq, radius);
}

std::vector<std::size_t> KdTree2::radius_search(Point2 q, double radius) const {
  std::vector<std::size_t> out;
  if (points_.empty() || radius < 0.0) return out;
  radius_rec(0, q, radius * radius, out);
  std::sort(out.begin(), out.end());
  return out;
}

void KdTree2::radius_rec(int id, Point2 q, double r2, std::vector<std::size_t>& out) const {
  const Node& n = nodes_[id];
  if (n.left < 0) {
    for (std::size_t i = n.begin; i < n.end; ++i) {
      if (sq_dist(q, points_[i]) <= r2) out.push_back(original_[i]);
    }
    return;
  }
  const double diff = coord(q, n.dim) - n.split;
  if (diff <= 0.0 || diff * diff <= r2) radius_rec(n.left, q, r2, out);
  if (diff >= 0.0 || diff * diff <= r2) radius_rec(n.right, q, r2, out);
}

PointMap::PointMap(PointCloud2 points) : cloud_(std::move(points)) {
  if (cloud_.empty()) throw DataError("cannot build a map from an empty cloud");
  index_ = KdTree2(cloud_.points());
  min_ = max_ = cloud_[0];
  for (const Point2& p : cloud_) {
    min_.x = std::min(min_.x, p.x);
    min_.y = std::min(min_.y, p.y);
    max_.x = std::max(max_.x, p.x);
    max_.y = std::max(max_.y, p.y);
  }
}

double PointMap::nearest_distance(Point2 p) const {
  return std::sqrt(index_.nearest(p).squared_distance);
}

std::size_t PointMap::matched_count(const PointCloud2& scan, double d_th) const {
  if (!(d_th > 0.0)) throw ConfigError("d_th must be positive");
  std::size_t n = 0;
  for (const Point2& p : scan) n += is_matched(p, d_th) ? 1 : 0;
  return n;
}

PointMap build_index(PointCloud2 points) { return PointMap(std::move(points)); }

}  // namespace radarloc

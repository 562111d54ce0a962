#include "radarloc/kernels.hpp"

#include <cmath>

#include "radarloc/error.hpp"

namespace radarloc::kernels {

namespace {

std::size_t count_for_pose(const PointMap& map, const PointCloud2& scan, const Pose2& pose,
                           double d_th) {
  const double c = std::cos(pose.yaw());
  const double s = std::sin(pose.yaw());
  std::size_t n = 0;
  for (const Point2& q : scan) {
    const Point2 w{c * q.x - s * q.y + pose.x(), s * q.x + c * q.y + pose.y()};
    n += map.is_matched(w, d_th) ? 1 : 0;
  }
  return n;
}

void check_threshold(double d_th) {
  if (!(d_th > 0.0)) throw ConfigError("d_th must be positive");
}

}  // namespace

std::vector<std::size_t> matched_counts(const PointMap& map, const PointCloud2& scan,
                                        std::span<const Pose2> poses, double d_th) {
  check_threshold(d_th);
  std::vector<std::size_t> counts(poses.size());
  const auto n = static_cast<std::ptrdiff_t>(poses.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    counts[static_cast<std::size_t>(i)] =
        count_for_pose(map, scan, poses[static_cast<std::size_t>(i)], d_th);
  }
  return counts;
}

std::vector<std::size_t> matched_counts_serial(const PointMap& map, const PointCloud2& scan,
                                               std::span<const Pose2> poses, double d_th) {
  check_threshold(d_th);
  std::vector<std::size_t> counts(poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    counts[i] = count_for_pose(map, scan, poses[i], d_th);
  }
  return counts;
}

std::vector<double> nearest_distances(const KdTree2& index, std::span<const Point2> queries) {
  std::vector<double> out(queries.size());
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = std::sqrt(index.nearest(queries[k]).squared_distance);
  }
  return out;
}

std::vector<double> nearest_distances_serial(const KdTree2& index,
                                             std::span<const Point2> queries) {
  std::vector<double> out(queries.size());
  for (std::size_t k = 0; k < queries.size(); ++k) {
    out[k] = std::sqrt(index.nearest(queries[k]).squared_distance);
  }
  return out;
}

std::vector<KdTree2::Neighbor> nearest_neighbors(const KdTree2& index,
                                                 std::span<const Point2> queries) {
  std::vector<KdTree2::Neighbor> out(queries.size());
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = index.nearest(queries[k]);
  }
  return out;
}

std::vector<KdTree2::Neighbor> nearest_neighbors_serial(const KdTree2& index,
                                                        std::span<const Point2> queries) {
  std::vector<KdTree2::Neighbor> out(queries.size());
  for (std::size_t k = 0; k < queries.size(); ++k) out[k] = index.nearest(queries[k]);
  return out;
}

}  // namespace radarloc::kernels

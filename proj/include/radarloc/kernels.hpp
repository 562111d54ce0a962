#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version and a serial
// reference with the same signature; the two must agree exactly (both use
// integer counts or per-element writes, so there is no reduction-order
// dependence).

#include <cstddef>
#include <span>
#include <vector>

#include "radarloc/geometry.hpp"
#include "radarloc/map_index.hpp"

namespace radarloc::kernels {

/// For every pose, the number of scan points that match the map once the
/// scan is placed at that pose.
std::vector<std::size_t> matched_counts(const PointMap& map, const PointCloud2& scan,
                                        std::span<const Pose2> poses, double d_th);
std::vector<std::size_t> matched_counts_serial(const PointMap& map, const PointCloud2& scan,
                                               std::span<const Pose2> poses, double d_th);

/// Nearest map distance for every query point.
std::vector<double> nearest_distances(const KdTree2& index, std::span<const Point2> queries);
std::vector<double> nearest_distances_serial(const KdTree2& index,
                                             std::span<const Point2> queries);

/// Nearest neighbour (index, squared distance) for every query point.
std::vector<KdTree2::Neighbor> nearest_neighbors(const KdTree2& index,
                                                 std::span<const Point2> queries);
std::vector<KdTree2::Neighbor> nearest_neighbors_serial(const KdTree2& index,
                                                        std::span<const Point2> queries);

}  // namespace radarloc::kernels

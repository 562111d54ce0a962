#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "radarloc/geometry.hpp"

namespace radarloc {

struct IcpParams {
  int max_iterations = 50;
  double convergence_eps_translation = 1e-5;  // metres per iteration
  double convergence_eps_rotation = 1e-5;     // radians per iteration
  double max_correspondence_dist = 2.0;       // metres
  std::size_t min_correspondences = 10;

  /// Throws ConfigError unless all fields are positive and
  /// min_correspondences >= 3.
  void validate() const;

  /// Wide gates for whole-session map registration.
  static IcpParams session_registration();
};

struct IcpResult {
  Pose2 transform;  // maps source points into the target frame
  double rms_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::size_t correspondence_count = 0;
  /// Post-update RMS residual of each iteration's correspondences.
  std::vector<double> rms_history;
};

using PointPair = std::pair<Point2, Point2>;  // (source, target)

/// Closed-form least-squares rigid transform taking sources onto targets.
/// Throws DegenerateGeometryError when all source points coincide.
Pose2 best_rigid_transform(std::span<const PointPair> pairs);

/// Point-to-point ICP of `source` onto `target` starting from `init`.
/// Throws CorrespondenceError when fewer than min_correspondences pairs
/// survive the distance gate at any iteration.
IcpResult icp_align(const PointCloud2& source, const PointCloud2& target, const Pose2& init,
                    const IcpParams& params = {});

/// ICP with session-registration gates; places map_b in map_a's frame.
IcpResult register_session(const PointCloud2& map_a, const PointCloud2& map_b,
                           const Pose2& init);

}  // namespace radarloc

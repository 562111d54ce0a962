#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "radarloc/geometry.hpp"

namespace radarloc {

/// Rectangular corridor loop: two concentric wall rectangles around a
/// centreline, plus seeded pillars and perpendicular wall stubs that break
/// along-corridor symmetry.
struct CorridorLoopSpec {
  double length = 62.575;        // centreline extent in x, metres
  double width = 40.0;           // centreline extent in y, metres
  double corridor_width = 8.0;   // wall-to-wall
  double wall_spacing = 0.2;     // point pitch along walls
  std::size_t landmarks = 40;    // pillar clusters
  std::size_t stubs = 40;        // short walls jutting out from either side
  double corner_radius = 3.0;    // centreline corner rounding
  std::uint64_t seed = 7;

  void validate() const;
  /// Arc length of the rounded-rectangle centreline.
  double centreline_length() const;
};

/// World points, in the global frame, for the corridor loop.
PointCloud2 make_corridor_world(const CorridorLoopSpec& spec);

/// Pose at arc length s along the (wrapping) rounded centreline, heading
/// along the direction of travel.
Pose2 centreline_pose(const CorridorLoopSpec& spec, double s);

struct TimedPose {
  double t = 0.0;
  Pose2 pose;
};

struct TrajectorySpec {
  std::size_t steps = 500;
  double step_length = 0.4;  // metres per step
  double dt = 0.25;          // seconds per step
  double start_offset = 0.0; // arc length of the first pose
};

/// `steps` poses along the centreline, evenly spaced in time and arc length.
std::vector<TimedPose> make_centreline_trajectory(const CorridorLoopSpec& world,
                                                  const TrajectorySpec& traj);

}  // namespace radarloc

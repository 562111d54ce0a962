#include "radarloc/world.hpp"

#include <cmath>
#include <random>

#include "radarloc/error.hpp"

namespace radarloc {

void CorridorLoopSpec::validate() const {
  if (!(corridor_width > 0.0) || !(wall_spacing > 0.0)) {
    throw ConfigError("corridor width and wall spacing must be positive");
  }
  if (!(corner_radius >= 0.0)) throw ConfigError("corner radius must be >= 0");
  const double inner = std::min(length, width) - corridor_width;
  if (!(inner > 0.0)) throw ConfigError("corridor too wide for the loop extent");
  if (2.0 * corner_radius > std::min(length, width)) {
    throw ConfigError("corner radius too large for the loop extent");
  }
}

double CorridorLoopSpec::centreline_length() const {
  return 2.0 * (length - 2.0 * corner_radius) + 2.0 * (width - 2.0 * corner_radius) +
         2.0 * kPi * corner_radius;
}

namespace {

void add_segment(std::vector<Point2>& pts, Point2 a, Point2 b, double pitch) {
  const double len = distance(a, b);
  const auto n = static_cast<std::size_t>(std::ceil(len / pitch));
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n);
    pts.push_back({a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)});
  }
}

void add_rectangle(std::vector<Point2>& pts, double hx, double hy, double pitch) {
  add_segment(pts, {-hx, -hy}, {hx, -hy}, pitch);
  add_segment(pts, {hx, -hy}, {hx, hy}, pitch);
  add_segment(pts, {hx, hy}, {-hx, hy}, pitch);
  add_segment(pts, {-hx, hy}, {-hx, -hy}, pitch);
}

}  // namespace

PointCloud2 make_corridor_world(const CorridorLoopSpec& spec) {
  spec.validate();
  std::vector<Point2> pts;
  const double hx = spec.length / 2.0;
  const double hy = spec.width / 2.0;
  const double hw = spec.corridor_width / 2.0;
  add_rectangle(pts, hx + hw, hy + hw, spec.wall_spacing);
  add_rectangle(pts, hx - hw, hy - hw, spec.wall_spacing);

  // Pillars hug either wall at seeded positions along the loop so the
  // corridor is not self-similar along its axis.
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> along(0.0, spec.centreline_length());
  std::uniform_real_distribution<double> radius(0.2, 0.6);
  std::bernoulli_distribution side(0.5);
  for (std::size_t k = 0; k < spec.landmarks; ++k) {
    const Pose2 c = centreline_pose(spec, along(rng));
    const double r = radius(rng);
    const double offset = (hw - r - 0.3) * (side(rng) ? 1.0 : -1.0);
    const Point2 centre = c.apply({0.0, offset});
    const int n = std::max(6, static_cast<int>(std::ceil(2.0 * kPi * r / spec.wall_spacing)));
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * kPi * i / n;
      pts.push_back({centre.x + r * std::cos(a), centre.y + r * std::sin(a)});
    }
  }
  std::uniform_real_distribution<double> stub_len(0.8, 2.0);
  for (std::size_t k = 0; k < spec.stubs; ++k) {
    const Pose2 c = centreline_pose(spec, along(rng));
    const double sign = side(rng) ? 1.0 : -1.0;
    const double len = stub_len(rng);
    add_segment(pts, c.apply({0.0, sign * hw}), c.apply({0.0, sign * (hw - len)}),
                spec.wall_spacing);
  }
  return PointCloud2(std::move(pts), "world");
}

Pose2 centreline_pose(const CorridorLoopSpec& spec, double s) {
  const double total = spec.centreline_length();
  s = std::fmod(s, total);
  if (s < 0.0) s += total;
  const double r = spec.corner_radius;
  const double hx = spec.length / 2.0;
  const double hy = spec.width / 2.0;
  const double sx = spec.length - 2.0 * r;
  const double sy = spec.width - 2.0 * r;
  const double arc = kPi * r / 2.0;

  // Counter-clockwise from the left end of the bottom straight:
  // bottom straight, corner, right straight, corner, top, corner, left, corner.
  struct Leg {
    double len;
    bool straight;
    Point2 start;
    double heading;
  };
  const Leg legs[] = {
      {sx, true, {-hx + r, -hy}, 0.0},
      {arc, false, {hx - r, -hy}, 0.0},
      {sy, true, {hx, -hy + r}, kPi / 2.0},
      {arc, false, {hx, hy - r}, kPi / 2.0},
      {sx, true, {hx - r, hy}, kPi},
      {arc, false, {-hx + r, hy}, kPi},
      {sy, true, {-hx, hy - r}, -kPi / 2.0},
      {arc, false, {-hx, -hy + r}, -kPi / 2.0},
  };
  for (const Leg& leg : legs) {
    if (s <= leg.len || &leg == &legs[7]) {
      s = std::min(s, leg.len);
      if (leg.straight) {
        return {leg.start.x + s * std::cos(leg.heading), leg.start.y + s * std::sin(leg.heading),
                leg.heading};
      }
      // Left turn of radius r; centre sits to the left of the start heading.
      const double phi = r > 0.0 ? s / r : 0.0;
      const Pose2 start(leg.start.x, leg.start.y, leg.heading);
      const Point2 p = start.apply({r * std::sin(phi), r * (1.0 - std::cos(phi))});
      return {p.x, p.y, leg.heading + phi};
    }
    s -= leg.len;
  }
  return {};
}

std::vector<TimedPose> make_centreline_trajectory(const CorridorLoopSpec& world,
                                                  const TrajectorySpec& traj) {
  world.validate();
  if (!(traj.dt > 0.0)) throw ConfigError("trajectory dt must be positive");
  if (!(traj.step_length >= 0.0)) throw ConfigError("trajectory step length must be >= 0");
  std::vector<TimedPose> out;
  out.reserve(traj.steps);
  for (std::size_t k = 0; k < traj.steps; ++k) {
    const double kk = static_cast<double>(k);
    out.push_back({kk * traj.dt, centreline_pose(world, traj.start_offset + kk * traj.step_length)});
  }
  return out;
}

}  // namespace radarloc

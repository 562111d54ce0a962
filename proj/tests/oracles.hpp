#pragma once

// Independent brute-force recomputations used as test oracles. Nothing here
// touches the kd-tree or the OpenMP kernels.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "radarloc/geometry.hpp"

namespace oracle {

using radarloc::Point2;

inline double nearest_distance(const std::vector<Point2>& map, Point2 q) {
  double best = std::numeric_limits<double>::infinity();
  for (const Point2& m : map) {
    const double dx = q.x - m.x;
    const double dy = q.y - m.y;
    best = std::min(best, dx * dx + dy * dy);
  }
  return std::sqrt(best);
}

inline std::size_t matched_count(const std::vector<Point2>& map, const std::vector<Point2>& scan,
                                 double d_th) {
  std::size_t n = 0;
  for (const Point2& p : scan) n += nearest_distance(map, p) < d_th ? 1 : 0;
  return n;
}

/// Hand-expanded rigid transform, written independently of Pose2::apply.
inline Point2 rigid(double x, double y, double yaw, Point2 p) {
  return {std::cos(yaw) * p.x - std::sin(yaw) * p.y + x,
          std::sin(yaw) * p.x + std::cos(yaw) * p.y + y};
}

inline std::vector<Point2> random_points(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point2> out(n);
  for (Point2& p : out) {
    p.x = u(rng);
    p.y = u(rng);
  }
  return out;
}

/// Per-bin counts over [edges[i], edges[i+1]) plus overflow, via linear scans.
struct Histogram {
  std::vector<std::size_t> counts;
  std::size_t overflow = 0;
};

inline Histogram histogram(const std::vector<double>& distances, const std::vector<double>& edges) {
  Histogram h;
  h.counts.assign(edges.size() - 1, 0);
  for (double d : distances) {
    bool placed = false;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      if (d >= edges[i] && d < edges[i + 1]) {
        ++h.counts[i];
        placed = true;
        break;
      }
    }
    if (!placed) ++h.overflow;
  }
  return h;
}

}  // namespace oracle

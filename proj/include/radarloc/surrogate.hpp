#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "radarloc/geometry.hpp"
#include "radarloc/map_index.hpp"

namespace radarloc {

/// Three-knob degradation model standing in for learned radar-to-lidar
/// generator output: point dropout, position jitter and ghost returns.
struct DegradeParams {
  double keep_prob = 1.0;     // survival probability per point
  double jitter_sigma = 0.0;  // metres, isotropic
  double ghost_rate = 0.0;    // expected ghosts per scan
  double max_range = 64.0;    // metres

  void validate() const;
  bool is_identity() const {
    return keep_prob == 1.0 && jitter_sigma == 0.0 && ghost_rate == 0.0;
  }
};

/// Ideal scan: per bearing k * angular_step, the nearest world point within
/// half a step of that bearing and within max_range, in the sensor frame.
/// Returns are ordered by bearing.
PointCloud2 simulate_scan(const PointMap& world, const Pose2& pose, double max_range,
                          double angular_step);

/// Drops, jitters, adds Poisson(ghost_rate) ghosts uniform over the sensing
/// disk, then range-gates. Survivors keep their input order; ghosts follow.
PointCloud2 degrade(const PointCloud2& scan, const DegradeParams& p, std::uint64_t seed);

struct DistanceHistogram {
  std::vector<double> bin_edges;    // ascending, first edge 0
  std::vector<std::size_t> counts;  // counts[i] covers [edges[i], edges[i+1])
  std::size_t overflow = 0;         // distances >= last edge
  std::size_t total = 0;
};

/// Edges lo, lo + step, ..., up to and including hi.
std::vector<double> make_bin_edges(double lo, double step, double hi);
/// 0 : 0.25 : 5 m.
std::vector<double> default_bin_edges();

/// Nearest-neighbour distance from every fake point to the real cloud,
/// binned. Throws DataError when `real` is empty.
DistanceHistogram nn_distance_histogram(const PointCloud2& fake, const PointCloud2& real,
                                        const std::vector<double>& bin_edges);

/// Fraction of distances strictly below d. d must be one of the bin edges
/// (or +inf, giving 1); anything else throws ConfigError.
double fraction_within(const DistanceHistogram& h, double d);

}  // namespace radarloc

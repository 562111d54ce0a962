#include "radarloc/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "radarloc/error.hpp"
#include "radarloc/kernels.hpp"
#include "radarloc/scan_repr.hpp"

namespace radarloc {

void DegradeParams::validate() const {
  if (!(keep_prob >= 0.0 && keep_prob <= 1.0)) throw ConfigError("keep_prob must lie in [0, 1]");
  if (!(jitter_sigma >= 0.0) || !std::isfinite(jitter_sigma)) {
    throw ConfigError("jitter_sigma must be >= 0");
  }
  if (!(ghost_rate >= 0.0) || !std::isfinite(ghost_rate)) {
    throw ConfigError("ghost_rate must be >= 0");
  }
  if (!(max_range > 0.0) || !std::isfinite(max_range)) {
    throw ConfigError("max_range must be positive and finite");
  }
}

PointCloud2 simulate_scan(const PointMap& world, const Pose2& pose, double max_range,
                          double angular_step) {
  if (!(angular_step > 0.0)) throw ConfigError("angular_step must be positive");
  if (!(max_range > 0.0)) throw ConfigError("max_range must be positive");
  const auto bins = static_cast<std::size_t>(std::max(1.0, std::round(2.0 * kPi / angular_step)));
  const Pose2 to_sensor = inverse(pose);

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> best(bins, kNone);
  std::vector<double> best_range(bins, std::numeric_limits<double>::infinity());
  std::vector<Point2> local_of(bins);

  for (std::size_t idx : world.index().radius_search({pose.x(), pose.y()}, max_range)) {
    const Point2 local = to_sensor.apply(world.cloud()[idx]);
    const double r = norm(local);
    if (r > max_range) continue;
    const double bearing = std::atan2(local.y, local.x);
    auto k = static_cast<long long>(std::llround(bearing / angular_step)) %
             static_cast<long long>(bins);
    if (k < 0) k += static_cast<long long>(bins);
    const auto bin = static_cast<std::size_t>(k);
    if (r < best_range[bin] || (r == best_range[bin] && idx < best[bin])) {
      best[bin] = idx;
      best_range[bin] = r;
      local_of[bin] = local;
    }
  }

  std::vector<Point2> out;
  for (std::size_t b = 0; b < bins; ++b) {
    if (best[b] != kNone) out.push_back(local_of[b]);
  }
  return PointCloud2(std::move(out), "sensor");
}

PointCloud2 degrade(const PointCloud2& scan, const DegradeParams& p, std::uint64_t seed) {
  p.validate();
  if (p.is_identity()) return range_filter(scan, p.max_range);

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(p.keep_prob);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<Point2> out;
  out.reserve(scan.size());
  for (const Point2& q : scan) {
    if (!keep(rng)) continue;
    Point2 moved = q;
    if (p.jitter_sigma > 0.0) {
      moved.x += p.jitter_sigma * gauss(rng);
      moved.y += p.jitter_sigma * gauss(rng);
    }
    out.push_back(moved);
  }
  if (p.ghost_rate > 0.0) {
    std::poisson_distribution<int> ghosts(p.ghost_rate);
    const int n = ghosts(rng);
    for (int i = 0; i < n; ++i) {
      const double r = p.max_range * std::sqrt(unif(rng));
      const double th = 2.0 * kPi * unif(rng);
      out.push_back({r * std::cos(th), r * std::sin(th)});
    }
  }
  return range_filter(PointCloud2(std::move(out), scan.frame()), p.max_range);
}

std::vector<double> make_bin_edges(double lo, double step, double hi) {
  if (!(step > 0.0) || !(hi > lo)) throw ConfigError("bin spec needs step > 0 and hi > lo");
  std::vector<double> edges;
  for (std::size_t k = 0;; ++k) {
    const double e = lo + static_cast<double>(k) * step;
    if (e > hi + 1e-9 * step) break;
    edges.push_back(e);
  }
  return edges;
}

std::vector<double> default_bin_edges() { return make_bin_edges(0.0, 0.25, 5.0); }

DistanceHistogram nn_distance_histogram(const PointCloud2& fake, const PointCloud2& real,
                                        const std::vector<double>& bin_edges) {
  if (real.empty()) throw DataError("similarity needs a non-empty reference cloud");
  if (bin_edges.size() < 2 || bin_edges.front() != 0.0) {
    throw ConfigError("histogram needs at least two edges starting at 0");
  }
  for (std::size_t i = 1; i < bin_edges.size(); ++i) {
    if (!(bin_edges[i] > bin_edges[i - 1])) throw ConfigError("bin edges must increase strictly");
  }
  const KdTree2 index(real.points());
  const auto dists = kernels::nearest_distances(index, fake.points());

  DistanceHistogram h;
  h.bin_edges = bin_edges;
  h.counts.assign(bin_edges.size() - 1, 0);
  h.total = dists.size();
  for (double d : dists) {
    const auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), d);
    if (it == bin_edges.end()) {
      ++h.overflow;
    } else {
      ++h.counts[static_cast<std::size_t>(it - bin_edges.begin()) - 1];
    }
  }
  return h;
}

double fraction_within(const DistanceHistogram& h, double d) {
  if (h.total == 0) return 0.0;
  if (std::isinf(d) && d > 0.0) return 1.0;
  const auto& e = h.bin_edges;
  const double tol = 1e-9 * std::max(1.0, std::abs(d));
  const auto it = std::find_if(e.begin(), e.end(), [&](double x) { return std::abs(x - d) <= tol; });
  if (it == e.end()) throw ConfigError("fraction_within: " + std::to_string(d) + " is not a bin edge");
  const auto upto = static_cast<std::size_t>(it - e.begin());
  std::size_t below = 0;
  for (std::size_t i = 0; i < upto; ++i) below += h.counts[i];
  return static_cast<double>(below) / static_cast<double>(h.total);
}

}  // namespace radarloc

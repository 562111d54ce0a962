#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radarloc/geometry.hpp"
#include "radarloc/icp.hpp"
#include "radarloc/map_index.hpp"

namespace radarloc {

struct Particle {
  Pose2 pose;
  double weight = 0.0;
};

/// Non-empty set of weighted pose hypotheses. When `normalized()` the
/// weights sum to one.
class ParticleSet {
 public:
  /// Throws ConfigError when empty or when a weight is negative/non-finite.
  explicit ParticleSet(std::vector<Particle> particles, bool normalized = false);

  std::span<const Particle> particles() const { return particles_; }
  std::size_t size() const { return particles_.size(); }
  bool normalized() const { return normalized_; }
  const Particle& operator[](std::size_t i) const { return particles_[i]; }

  std::vector<Pose2> poses() const;
  std::vector<double> weights() const;

  /// Divides by the weight sum. Returns false (and leaves weights alone)
  /// when the sum is zero.
  bool normalize();

 private:
  std::vector<Particle> particles_;
  bool normalized_;
};

/// Per-axis standard deviations of a Gaussian pose spread.
struct PoseSpread {
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  double sigma_yaw = 0.0;
};

/// Robot-frame additive Gaussian motion noise, inflated in proportion to the
/// step's translation and rotation.
struct MotionNoise {
  double sigma_x = 0.2;
  double sigma_y = 0.2;
  double sigma_yaw = 0.04;
  double alpha_trans = 0.05;
  double alpha_rot = 0.1;

  void validate() const;
  static MotionNoise zero() { return {0.0, 0.0, 0.0, 0.0, 0.0}; }
};

struct MclConfig {
  std::size_t n_particles = 500;
  double lambda = 2.0;
  double d_th = 1.0;
  MotionNoise motion_noise;
  double ess_threshold_fraction = 0.5;
  std::uint64_t rng_seed = 1;
  /// Consecutive degenerate updates tolerated before declaring the filter lost.
  std::size_t lost_window = 10;

  void validate() const;
};

/// Reproducible sub-seed for a (base seed, step, stream) triple.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t step, std::uint64_t stream);

/// n particles drawn from independent Gaussians about `center`, uniform weights.
ParticleSet init_particles(const Pose2& center, const PoseSpread& spread, std::size_t n,
                           std::uint64_t seed);

/// n particles uniform over the map's bounding box with uniform yaw; used for
/// global re-initialization.
ParticleSet init_particles_uniform(const PointMap& map, std::size_t n, std::uint64_t seed);

/// Each pose becomes compose(pose, u + eps) with eps Gaussian in the robot
/// frame. Weights are kept; the normalized flag is cleared.
ParticleSet predict(const ParticleSet& ps, const Pose2& u, const MotionNoise& noise,
                    std::uint64_t seed);

struct WeightUpdate {
  ParticleSet particles;
  std::vector<std::size_t> matched;  // N per particle
  std::size_t max_matched = 0;
  bool degenerate = false;  // every weight came out zero; reset to uniform
};

/// Multiplies each prior weight by N^lambda, where N is the matched-point
/// count of the scan placed at that particle, then normalizes.
WeightUpdate update_weights(const ParticleSet& ps, const PointCloud2& scan, const PointMap& map,
                            double d_th, double lambda);

/// Serial reference of update_weights (same arithmetic, no OpenMP).
WeightUpdate update_weights_serial(const ParticleSet& ps, const PointCloud2& scan,
                                   const PointMap& map, double d_th, double lambda);

/// 1 / sum(w^2). Precondition: normalized.
double effective_sample_size(const ParticleSet& ps);

/// Offspring counts of systematic resampling with pointers (u + m) / n,
/// m = 0..n-1, for a single offset u in [0, 1). Weights must sum to one.
std::vector<std::size_t> systematic_offspring_counts(std::span<const double> weights, double u);

/// Low-variance resampling; output weights uniform.
ParticleSet resample(const ParticleSet& ps, std::uint64_t seed);

/// Weighted mean position and weighted circular-mean yaw.
Pose2 estimate_pose(const ParticleSet& ps);

struct StepDiagnostics {
  std::size_t step_index = 0;
  Pose2 estimate;
  Pose2 odometry;
  double ess = 0.0;
  std::size_t max_matched = 0;
  double icp_rms = 0.0;
  bool degenerate = false;
  bool icp_failed = false;
  bool resampled = false;
};

/// Tab-separated: step, x, y, yaw, ess, max_matched, flags.
std::string format_diagnostics(const StepDiagnostics& d);

/// The recursive filter: ICP odometry, prediction, matched-point update and
/// ESS-gated resampling. Single writer; the map is shared read-only.
class Localizer {
 public:
  Localizer(const PointMap& map, MclConfig cfg, IcpParams icp = {});

  void initialize(ParticleSet particles);
  void initialize(const Pose2& center, const PoseSpread& spread);
  bool initialized() const { return particles_.has_value(); }

  /// First frame: measurement update only, no motion.
  StepDiagnostics observe(const PointCloud2& scan);

  /// One recursion. Throws LostLocalizationError after `lost_window`
  /// consecutive degenerate updates.
  StepDiagnostics step(const PointCloud2& scan_prev, const PointCloud2& scan_curr);

  const ParticleSet& particles() const { return *particles_; }
  const MclConfig& config() const { return cfg_; }

 private:
  StepDiagnostics measure(const PointCloud2& scan, StepDiagnostics diag);

  const PointMap* map_;
  MclConfig cfg_;
  IcpParams icp_;
  std::optional<ParticleSet> particles_;
  std::optional<Pose2> last_motion_;
  std::size_t step_count_ = 0;
  std::size_t degenerate_run_ = 0;
};

}  // namespace radarloc

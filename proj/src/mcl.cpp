#include "radarloc/mcl.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "radarloc/cloud_io.hpp"
#include "radarloc/error.hpp"
#include "radarloc/kernels.hpp"

namespace radarloc {

ParticleSet::ParticleSet(std::vector<Particle> particles, bool normalized)
    : particles_(std::move(particles)), normalized_(normalized) {
  if (particles_.empty()) throw ConfigError("particle set must be non-empty");
  for (const Particle& p : particles_) {
    if (!std::isfinite(p.weight) || p.weight < 0.0) {
      throw ConfigError("particle weights must be finite and non-negative");
    }
  }
}

std::vector<Pose2> ParticleSet::poses() const {
  std::vector<Pose2> out;
  out.reserve(particles_.size());
  for (const Particle& p : particles_) out.push_back(p.pose);
  return out;
}

std::vector<double> ParticleSet::weights() const {
  std::vector<double> out;
  out.reserve(particles_.size());
  for (const Particle& p : particles_) out.push_back(p.weight);
  return out;
}

bool ParticleSet::normalize() {
  double sum = 0.0;
  for (const Particle& p : particles_) sum += p.weight;
  if (!(sum > 0.0)) return false;
  for (Particle& p : particles_) p.weight /= sum;
  normalized_ = true;
  return true;
}

void MotionNoise::validate() const {
  for (double v : {sigma_x, sigma_y, sigma_yaw, alpha_trans, alpha_rot}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("motion noise terms must be >= 0");
  }
}

void MclConfig::validate() const {
  if (n_particles < 1) throw ConfigError("mcl.n_particles must be >= 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("mcl.lambda must be > 0");
  if (!(d_th > 0.0) || !std::isfinite(d_th)) throw ConfigError("mcl.d_th must be > 0");
  if (!(ess_threshold_fraction > 0.0) || ess_threshold_fraction > 1.0) {
    throw ConfigError("mcl.ess_threshold_fraction must lie in (0, 1]");
  }
  if (lost_window < 1) throw ConfigError("mcl.lost_window must be >= 1");
  motion_noise.validate();
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t step, std::uint64_t stream) {
  // splitmix64 finalizer over a mixed key
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (step + 1) + 0xBF58476D1CE4E5B9ull * stream;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

ParticleSet init_particles(const Pose2& center, const PoseSpread& spread, std::size_t n,
                           std::uint64_t seed) {
  if (n < 1) throw ConfigError("need at least one particle");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Particle> out;
  out.reserve(n);
  const double w = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = spread.sigma_x * gauss(rng);
    const double dy = spread.sigma_y * gauss(rng);
    const double dth = spread.sigma_yaw * gauss(rng);
    out.push_back({Pose2(center.x() + dx, center.y() + dy, center.yaw() + dth), w});
  }
  return ParticleSet(std::move(out), true);
}

ParticleSet init_particles_uniform(const PointMap& map, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("need at least one particle");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(map.min_corner().x, map.max_corner().x);
  std::uniform_real_distribution<double> uy(map.min_corner().y, map.max_corner().y);
  std::uniform_real_distribution<double> uyaw(-kPi, kPi);
  std::vector<Particle> out;
  out.reserve(n);
  const double w = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    out.push_back({Pose2(x, y, uyaw(rng)), w});
  }
  return ParticleSet(std::move(out), true);
}

ParticleSet predict(const ParticleSet& ps, const Pose2& u, const MotionNoise& noise,
                    std::uint64_t seed) {
  noise.validate();
  const double trans = std::hypot(u.x(), u.y());
  const double sx = noise.sigma_x + noise.alpha_trans * trans;
  const double sy = noise.sigma_y + noise.alpha_trans * trans;
  const double syaw = noise.sigma_yaw + noise.alpha_rot * std::abs(u.yaw());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Particle> out;
  out.reserve(ps.size());
  for (const Particle& p : ps.particles()) {
    const double ex = sx * gauss(rng);
    const double ey = sy * gauss(rng);
    const double eth = syaw * gauss(rng);
    const Pose2 noisy(u.x() + ex, u.y() + ey, u.yaw() + eth);
    out.push_back({compose(p.pose, noisy), p.weight});
  }
  return ParticleSet(std::move(out), false);
}

namespace {

WeightUpdate apply_counts(const ParticleSet& ps, std::vector<std::size_t> counts, double lambda) {
  std::vector<Particle> next(ps.particles().begin(), ps.particles().end());
  std::size_t max_n = 0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    max_n = std::max(max_n, counts[i]);
    const double raw = counts[i] == 0 ? 0.0 : std::pow(static_cast<double>(counts[i]), lambda);
    next[i].weight *= raw;
  }
  ParticleSet out(std::move(next), false);
  bool degenerate = false;
  if (!out.normalize()) {
    const double w = 1.0 / static_cast<double>(out.size());
    std::vector<Particle> reset(out.particles().begin(), out.particles().end());
    for (Particle& p : reset) p.weight = w;
    out = ParticleSet(std::move(reset), true);
    degenerate = true;
  }
  return {std::move(out), std::move(counts), max_n, degenerate};
}

void check_update_args(const PointCloud2& scan, double d_th, double lambda) {
  if (scan.empty()) throw ConfigError("update_weights requires a non-empty scan");
  if (!(d_th > 0.0)) throw ConfigError("d_th must be positive");
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
}

}  // namespace

WeightUpdate update_weights(const ParticleSet& ps, const PointCloud2& scan, const PointMap& map,
                            double d_th, double lambda) {
  check_update_args(scan, d_th, lambda);
  const auto poses = ps.poses();
  return apply_counts(ps, kernels::matched_counts(map, scan, poses, d_th), lambda);
}

WeightUpdate update_weights_serial(const ParticleSet& ps, const PointCloud2& scan,
                                   const PointMap& map, double d_th, double lambda) {
  check_update_args(scan, d_th, lambda);
  const auto poses = ps.poses();
  return apply_counts(ps, kernels::matched_counts_serial(map, scan, poses, d_th), lambda);
}

double effective_sample_size(const ParticleSet& ps) {
  double sq = 0.0;
  for (const Particle& p : ps.particles()) sq += p.weight * p.weight;
  return 1.0 / sq;
}

std::vector<std::size_t> systematic_offspring_counts(std::span<const double> weights, double u) {
  if (weights.empty()) return {};
  if (!(u >= 0.0) || !(u < 1.0)) throw ConfigError("systematic offset must lie in [0, 1)");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw ConfigError("weights must have a positive sum");
  const double n = static_cast<double>(weights.size());

  // Pointer m lands in particle i iff C_{i-1} <= (u + m) / n < C_i, so the
  // number of pointers at or below particle i is ceil(n * C_i - u).
  std::vector<std::size_t> counts(weights.size());
  double cumulative = 0.0;
  std::size_t below = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cumulative += weights[i];
    const double c = i + 1 == weights.size() ? 1.0 : std::min(cumulative / total, 1.0);
    const double upto = std::max(0.0, std::ceil(n * c - u));
    const auto upto_n = static_cast<std::size_t>(upto);
    counts[i] = upto_n > below ? upto_n - below : 0;
    below = std::max(below, upto_n);
  }
  return counts;
}

ParticleSet resample(const ParticleSet& ps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  const auto weights = ps.weights();
  const auto counts = systematic_offspring_counts(weights, u);
  const double w = 1.0 / static_cast<double>(ps.size());
  std::vector<Particle> out;
  out.reserve(ps.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t k = 0; k < counts[i]; ++k) out.push_back({ps[i].pose, w});
  }
  return ParticleSet(std::move(out), true);
}

Pose2 estimate_pose(const ParticleSet& ps) {
  double sw = 0.0, x = 0.0, y = 0.0, s = 0.0, c = 0.0;
  for (const Particle& p : ps.particles()) {
    sw += p.weight;
    x += p.weight * p.pose.x();
    y += p.weight * p.pose.y();
    s += p.weight * std::sin(p.pose.yaw());
    c += p.weight * std::cos(p.pose.yaw());
  }
  if (!(sw > 0.0)) throw ConfigError("cannot estimate a pose from zero total weight");
  return {x / sw, y / sw, std::atan2(s, c)};
}

std::string format_diagnostics(const StepDiagnostics& d) {
  std::string flags;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!flags.empty()) flags += ',';
    flags += name;
  };
  add(d.degenerate, "degenerate");
  add(d.icp_failed, "icp_failed");
  add(d.resampled, "resampled");
  if (flags.empty()) flags = "-";
  return std::to_string(d.step_index) + '\t' + format_number(d.estimate.x()) + '\t' +
         format_number(d.estimate.y()) + '\t' + format_number(d.estimate.yaw()) + '\t' +
         format_number(d.ess) + '\t' + std::to_string(d.max_matched) + '\t' + flags;
}

Localizer::Localizer(const PointMap& map, MclConfig cfg, IcpParams icp)
    : map_(&map), cfg_(cfg), icp_(icp) {
  cfg_.validate();
  icp_.validate();
}

void Localizer::initialize(ParticleSet particles) {
  if (!particles.normalized() && !particles.normalize()) {
    throw ConfigError("initial particles have zero total weight");
  }
  particles_ = std::move(particles);
  last_motion_.reset();
  degenerate_run_ = 0;
}

void Localizer::initialize(const Pose2& center, const PoseSpread& spread) {
  initialize(init_particles(center, spread, cfg_.n_particles,
                            derive_seed(cfg_.rng_seed, step_count_, 0)));
}

StepDiagnostics Localizer::observe(const PointCloud2& scan) {
  if (!particles_) throw ConfigError("localizer used before initialize()");
  StepDiagnostics diag;
  diag.step_index = step_count_;
  return measure(scan, diag);
}

StepDiagnostics Localizer::step(const PointCloud2& scan_prev, const PointCloud2& scan_curr) {
  if (!particles_) throw ConfigError("localizer used before initialize()");
  StepDiagnostics diag;
  diag.step_index = step_count_;

  // Constant-velocity seed: the previous motion, identity on the first step.
  const Pose2 guess = last_motion_.value_or(Pose2::identity());
  Pose2 motion = guess;
  try {
    const IcpResult icp = icp_align(scan_curr, scan_prev, guess, icp_);
    motion = icp.transform;
    diag.icp_rms = icp.rms_residual;
  } catch (const CorrespondenceError&) {
    diag.icp_failed = true;
  } catch (const DegenerateGeometryError&) {
    diag.icp_failed = true;
  }
  last_motion_ = motion;
  diag.odometry = motion;

  particles_ = predict(*particles_, motion, cfg_.motion_noise,
                       derive_seed(cfg_.rng_seed, step_count_, 1));
  return measure(scan_curr, diag);
}

StepDiagnostics Localizer::measure(const PointCloud2& scan, StepDiagnostics diag) {
  if (scan.empty()) {
    diag.degenerate = true;
    if (!particles_->normalized()) particles_->normalize();
  } else {
    WeightUpdate upd = update_weights(*particles_, scan, *map_, cfg_.d_th, cfg_.lambda);
    particles_ = std::move(upd.particles);
    diag.max_matched = upd.max_matched;
    diag.degenerate = upd.degenerate;
  }
  degenerate_run_ = diag.degenerate ? degenerate_run_ + 1 : 0;

  diag.estimate = estimate_pose(*particles_);
  diag.ess = effective_sample_size(*particles_);
  if (diag.ess < cfg_.ess_threshold_fraction * static_cast<double>(particles_->size())) {
    particles_ = resample(*particles_, derive_seed(cfg_.rng_seed, step_count_, 2));
    diag.resampled = true;
  }
  ++step_count_;

  if (degenerate_run_ >= cfg_.lost_window) {
    throw LostLocalizationError("no matched points for " + std::to_string(degenerate_run_) +
                                    " consecutive steps; re-initialization required",
                                diag.step_index);
  }
  return diag;
}

}  // namespace radarloc

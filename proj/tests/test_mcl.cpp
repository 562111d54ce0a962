#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "radarloc/error.hpp"
#include "radarloc/mcl.hpp"
#include "radarloc/surrogate.hpp"

using namespace radarloc;

namespace {

ParticleSet uniform_set(std::vector<Pose2> poses) {
  std::vector<Particle> ps;
  for (const Pose2& p : poses) ps.push_back({p, 1.0 / static_cast<double>(poses.size())});
  return ParticleSet(std::move(ps), true);
}

// Isolated landmarks at least `sep` apart, so every simulated return is an
// exact world point and consecutive scans share points.
PointCloud2 landmark_field(std::uint64_t seed, std::size_t n, double half, double sep) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-half, half);
  std::vector<Point2> pts;
  while (pts.size() < n) {
    const Point2 c{u(rng), u(rng)};
    bool ok = true;
    for (const Point2& p : pts) ok = ok && distance(p, c) >= sep;
    if (ok) pts.push_back(c);
  }
  return PointCloud2(std::move(pts), "world");
}

}  // namespace

TEST_CASE("init_particles examples") {
  const ParticleSet one = init_particles({1, 2, 0.3}, {}, 1, 5);
  REQUIRE(one.size() == 1);
  CHECK(one[0].weight == 1.0);
  CHECK(one[0].pose == Pose2(1, 2, 0.3));

  const std::size_t n = 10000;
  const Pose2 c(3, -4, 0.5);
  const ParticleSet many = init_particles(c, {1.0, 1.0, 0.1}, n, 42);
  double mx = 0, my = 0, myaw = 0;
  for (const Particle& p : many.particles()) {
    mx += p.pose.x();
    my += p.pose.y();
    myaw += p.pose.yaw();
    CHECK(p.weight == doctest::Approx(1.0 / n));
  }
  mx /= n;
  my /= n;
  myaw /= n;
  CHECK(std::abs(mx - c.x()) < 3 * 1.0 / std::sqrt(n));
  CHECK(std::abs(my - c.y()) < 3 * 1.0 / std::sqrt(n));
  CHECK(std::abs(myaw - c.yaw()) < 3 * 0.1 / std::sqrt(n));

  const ParticleSet again = init_particles(c, {1.0, 1.0, 0.1}, n, 42);
  for (std::size_t i = 0; i < n; ++i) CHECK(again[i].pose == many[i].pose);
  CHECK_THROWS_AS(init_particles(c, {}, 0, 1), ConfigError);
}

TEST_CASE("predict with zero noise is deterministic motion composition") {
  const ParticleSet ps = uniform_set({{0, 0, 0}, {1, 1, kPi / 2}, {-2, 3, -kPi / 4}});
  const ParticleSet same = predict(ps, Pose2::identity(), MotionNoise::zero(), 1);
  for (std::size_t i = 0; i < ps.size(); ++i) CHECK(same[i].pose == ps[i].pose);
  CHECK_FALSE(same.normalized());

  const ParticleSet moved = predict(ps, {1, 0, 0}, MotionNoise::zero(), 1);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double h = ps[i].pose.yaw();
    CHECK(moved[i].pose.x() == doctest::Approx(ps[i].pose.x() + std::cos(h)));
    CHECK(moved[i].pose.y() == doctest::Approx(ps[i].pose.y() + std::sin(h)));
    CHECK(moved[i].weight == ps[i].weight);
  }
}

TEST_CASE("predict noise has the configured per-axis spread") {
  const std::size_t n = 10000;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> h(-kPi, kPi);
  std::vector<Pose2> start;
  for (std::size_t i = 0; i < n; ++i) start.emplace_back(0.0, 0.0, h(rng));
  const ParticleSet ps = uniform_set(start);
  const MotionNoise noise{0.3, 0.1, 0.05, 0.0, 0.0};
  const ParticleSet out = predict(ps, Pose2::identity(), noise, 77);

  double sx = 0, sy = 0, syaw = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Pose2 d = compose(inverse(ps[i].pose), out[i].pose);  // robot-frame displacement
    sx += d.x() * d.x();
    sy += d.y() * d.y();
    syaw += d.yaw() * d.yaw();
  }
  CHECK(std::sqrt(sx / n) == doctest::Approx(0.3).epsilon(0.1));
  CHECK(std::sqrt(sy / n) == doctest::Approx(0.1).epsilon(0.1));
  CHECK(std::sqrt(syaw / n) == doctest::Approx(0.05).epsilon(0.1));
}

TEST_CASE("predict inflates noise with step size") {
  const ParticleSet ps = uniform_set(std::vector<Pose2>(5000, Pose2::identity()));
  const MotionNoise noise{0.0, 0.0, 0.0, 0.1, 0.2};
  const Pose2 u(2.0, 0.0, 0.5);
  const ParticleSet out = predict(ps, u, noise, 3);
  double sx = 0, syaw = 0;
  for (const Particle& p : out.particles()) {
    sx += (p.pose.x() - 2.0) * (p.pose.x() - 2.0);
    syaw += (p.pose.yaw() - 0.5) * (p.pose.yaw() - 0.5);
  }
  CHECK(std::sqrt(sx / 5000) == doctest::Approx(0.2).epsilon(0.1));
  CHECK(std::sqrt(syaw / 5000) == doctest::Approx(0.1).epsilon(0.1));
}

TEST_CASE("update_weights examples") {
  const PointMap map(PointCloud2({{0, 0}, {10, 0}, {20, 0}}));
  const PointCloud2 scan({{0, 0}, {10, 0}, {20, 0}});
  const ParticleSet ps = uniform_set({{0, 0, 0}, {-20, 0, 0}, {0, 5, 0}});

  const WeightUpdate lin = update_weights(ps, scan, map, 1.0, 1.0);
  CHECK(lin.matched == std::vector<std::size_t>{3, 1, 0});
  CHECK(lin.particles[0].weight == doctest::Approx(0.75));
  CHECK(lin.particles[1].weight == doctest::Approx(0.25));
  CHECK(lin.particles[2].weight == 0.0);
  CHECK(lin.max_matched == 3);
  CHECK_FALSE(lin.degenerate);
  CHECK(lin.particles.normalized());

  const WeightUpdate sq = update_weights(ps, scan, map, 1.0, 2.0);
  CHECK(sq.particles[0].weight == doctest::Approx(0.9));
  CHECK(sq.particles[1].weight == doctest::Approx(0.1));
}

TEST_CASE("update_weights multiplies into the prior") {
  const PointMap map(PointCloud2({{0, 0}, {10, 0}}));
  const PointCloud2 scan({{0, 0}, {10, 0}});
  std::vector<Particle> ps = {{{0, 0, 0}, 0.2}, {{-10, 0, 0}, 0.8}};
  const WeightUpdate u = update_weights(ParticleSet(ps, true), scan, map, 1.0, 1.0);
  // raw weights 2 and 1 -> 0.4 and 0.8 -> normalized 1/3 and 2/3
  CHECK(u.particles[0].weight == doctest::Approx(1.0 / 3.0));
  CHECK(u.particles[1].weight == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("update_weights flags degeneracy and resets to uniform") {
  const PointMap map(PointCloud2({{0, 0}}));
  const ParticleSet ps = uniform_set({{50, 0, 0}, {60, 0, 0}});
  const WeightUpdate u = update_weights(ps, PointCloud2({{0, 0}}), map, 1.0, 2.0);
  CHECK(u.degenerate);
  CHECK(u.particles[0].weight == 0.5);
  CHECK(u.particles[1].weight == 0.5);
  CHECK_THROWS_AS(update_weights(ps, PointCloud2{}, map, 1.0, 2.0), ConfigError);
}

TEST_CASE("truth particle outweighs an offset particle by the power law") {
  const PointCloud2 world = landmark_field(3, 60, 25, 2.0);
  const PointMap map(world);
  const Pose2 truth(1.0, -2.0, 0.3);
  const PointCloud2 scan = simulate_scan(map, truth, 30.0, deg_to_rad(0.5));
  const Pose2 off(truth.x() + 10.0, truth.y(), truth.yaw());
  const double lambda = 2.0;
  const WeightUpdate u = update_weights(uniform_set({truth, off}), scan, map, 1.0, lambda);

  auto brute = [&](const Pose2& p) {
    std::vector<Point2> placed;
    for (const Point2& q : scan) placed.push_back(oracle::rigid(p.x(), p.y(), p.yaw(), q));
    return oracle::matched_count({world.begin(), world.end()}, placed, 1.0);
  };
  const double n_true = static_cast<double>(brute(truth));
  const double n_off = static_cast<double>(brute(off));
  CHECK(n_true == static_cast<double>(scan.size()));
  if (n_off == 0.0) {
    CHECK(u.particles[1].weight == 0.0);
  } else {
    CHECK(u.particles[0].weight / u.particles[1].weight >=
          std::pow(n_true / n_off, lambda) * (1 - 1e-12));
  }
}

TEST_CASE("parallel and serial weight updates are identical") {
  const PointCloud2 world = landmark_field(8, 200, 40, 1.0);
  const PointMap map(world);
  const PointCloud2 scan = simulate_scan(map, Pose2(0, 0, 0), 30.0, deg_to_rad(1.0));
  const ParticleSet ps = init_particles(Pose2::identity(), {2.0, 2.0, 0.2}, 300, 4);
  const WeightUpdate a = update_weights(ps, scan, map, 1.0, 2.0);
  const WeightUpdate b = update_weights_serial(ps, scan, map, 1.0, 2.0);
  CHECK(a.matched == b.matched);
  for (std::size_t i = 0; i < ps.size(); ++i) CHECK(a.particles[i].weight == b.particles[i].weight);
}

TEST_CASE("effective_sample_size examples") {
  CHECK(effective_sample_size(uniform_set(std::vector<Pose2>(7))) == doctest::Approx(7.0));
  std::vector<Particle> one_hot = {{{}, 1.0}, {{}, 0.0}, {{}, 0.0}};
  CHECK(effective_sample_size(ParticleSet(one_hot, true)) == doctest::Approx(1.0));
  std::vector<Particle> w = {{{}, 0.5}, {{}, 0.25}, {{}, 0.25}};
  CHECK(effective_sample_size(ParticleSet(w, true)) == doctest::Approx(8.0 / 3.0));
}

TEST_CASE("resample examples") {
  std::vector<Pose2> poses;
  for (int i = 0; i < 8; ++i) poses.emplace_back(i, 0, 0);
  const ParticleSet u = resample(uniform_set(poses), 99);
  REQUIRE(u.size() == 8);
  for (int i = 0; i < 8; ++i) CHECK(u[static_cast<std::size_t>(i)].pose.x() == i);

  std::vector<Particle> first = {{{1, 0, 0}, 1.0}, {{2, 0, 0}, 0.0}, {{3, 0, 0}, 0.0},
                                 {{4, 0, 0}, 0.0}};
  const ParticleSet r = resample(ParticleSet(first, true), 5);
  REQUIRE(r.size() == 4);
  for (const Particle& p : r.particles()) {
    CHECK(p.pose.x() == 1.0);
    CHECK(p.weight == 0.25);
  }
  const ParticleSet again = resample(ParticleSet(first, true), 5);
  for (std::size_t i = 0; i < 4; ++i) CHECK(again[i].pose == r[i].pose);
}

TEST_CASE("systematic offspring counts stay within one of n*w") {
  std::mt19937_64 rng(12);
  std::exponential_distribution<double> e(1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 300);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = static_cast<std::size_t>(size(rng));
    std::vector<double> w(n);
    double s = 0;
    for (double& x : w) {
      x = u(rng) < 0.3 ? 0.0 : e(rng);
      s += x;
    }
    if (s == 0) w[0] = s = 1.0;
    for (double& x : w) x /= s;
    const auto counts = systematic_offspring_counts(w, u(rng));
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(static_cast<double>(counts[i]) - static_cast<double>(n) * w[i]) < 1.0);
      if (w[i] == 0.0) CHECK(counts[i] == 0);
      total += counts[i];
    }
    CHECK(total == n);
  }
}

TEST_CASE("estimate_pose examples") {
  const Pose2 p(2, 3, 1.0);
  CHECK(estimate_pose(uniform_set({p, p, p})).x() == doctest::Approx(2));
  CHECK(estimate_pose(uniform_set({p, p, p})).yaw() == doctest::Approx(1.0));

  const Pose2 wrap = estimate_pose(uniform_set({{0, 0, deg_to_rad(170)}, {0, 0, deg_to_rad(-170)}}));
  CHECK(std::abs(std::abs(wrap.yaw()) - kPi) < 1e-9);

  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-10, 10), a(-kPi, kPi), w(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Particle> ps;
    for (int i = 0; i < 50; ++i) ps.push_back({{u(rng), u(rng), a(rng)}, w(rng)});
    ParticleSet set(ps);
    set.normalize();
    double sw = 0, x = 0, y = 0, s = 0, c = 0;
    for (const Particle& q : set.particles()) {
      sw += q.weight;
      x += q.weight * q.pose.x();
      y += q.weight * q.pose.y();
      s += q.weight * std::sin(q.pose.yaw());
      c += q.weight * std::cos(q.pose.yaw());
    }
    const Pose2 e = estimate_pose(set);
    CHECK(std::abs(e.x() - x / sw) < 1e-9);
    CHECK(std::abs(e.y() - y / sw) < 1e-9);
    CHECK(std::abs(wrap_angle(e.yaw() - std::atan2(s, c))) < 1e-9);
  }
}

TEST_CASE("localizer tracks truth with perfect scans and zero motion noise") {
  const PointCloud2 world = landmark_field(21, 400, 60, 2.5);
  const PointMap map(world);
  MclConfig cfg;
  cfg.n_particles = 50;
  cfg.motion_noise = MotionNoise::zero();
  Localizer loc(map, cfg);
  loc.initialize(Pose2(-20, 0, 0.1), PoseSpread{});

  Pose2 truth(-20, 0, 0.1);
  PointCloud2 prev = simulate_scan(map, truth, 25.0, deg_to_rad(0.25));
  loc.observe(prev);
  const Pose2 motion(0.4, 0.0, 0.004);
  for (int k = 0; k < 100; ++k) {
    truth = compose(truth, motion);
    const PointCloud2 cur = simulate_scan(map, truth, 25.0, deg_to_rad(0.25));
    const StepDiagnostics d = loc.step(prev, cur);
    CHECK(distance({d.estimate.x(), d.estimate.y()}, {truth.x(), truth.y()}) <= cfg.d_th / 2);
    CHECK_FALSE(d.icp_failed);
    prev = cur;
  }
}

TEST_CASE("localizer declares lost after the degeneracy window") {
  const PointMap map(PointCloud2({{0, 0}, {1, 0}, {0, 1}}));
  MclConfig cfg;
  cfg.n_particles = 20;
  cfg.lost_window = 4;
  Localizer loc(map, cfg);
  loc.initialize(Pose2::identity(), {0.1, 0.1, 0.01});
  std::mt19937_64 rng(1);
  const PointCloud2 far(oracle::random_points(rng, 40, 200, 230));
  std::size_t steps = 0;
  CHECK(loc.observe(far).degenerate);
  ++steps;
  try {
    for (int k = 0; k < 10; ++k) {
      const StepDiagnostics d = loc.step(far, far);
      CHECK(d.degenerate);
      ++steps;
    }
    FAIL("expected LostLocalizationError");
  } catch (const LostLocalizationError& e) {
    CHECK(e.step() == 3);
  }
  CHECK(steps == 3);
}

TEST_CASE("localizer dead-reckons when ICP starves") {
  const PointCloud2 world = landmark_field(2, 100, 30, 2.0);
  const PointMap map(world);
  MclConfig cfg;
  cfg.n_particles = 30;
  Localizer loc(map, cfg);
  loc.initialize(Pose2::identity(), {0.1, 0.1, 0.01});
  const PointCloud2 sparse({{1, 1}, {2, 2}});
  loc.observe(sparse);
  const StepDiagnostics d = loc.step(sparse, sparse);
  CHECK(d.icp_failed);
  CHECK(d.odometry == Pose2::identity());
}

TEST_CASE("localizer is deterministic for fixed seeds") {
  const PointCloud2 world = landmark_field(5, 200, 40, 2.0);
  const PointMap map(world);
  auto run = [&] {
    MclConfig cfg;
    cfg.n_particles = 100;
    cfg.rng_seed = 1234;
    Localizer loc(map, cfg);
    loc.initialize(Pose2::identity(), {0.5, 0.5, 0.05});
    std::vector<Pose2> out;
    Pose2 truth;
    PointCloud2 prev = simulate_scan(map, truth, 25.0, deg_to_rad(1.0));
    out.push_back(loc.observe(prev).estimate);
    for (int k = 0; k < 20; ++k) {
      truth = compose(truth, Pose2(0.5, 0.0, 0.02));
      const PointCloud2 cur = simulate_scan(map, truth, 25.0, deg_to_rad(1.0));
      out.push_back(loc.step(prev, cur).estimate);
      prev = cur;
    }
    return out;
  };
  const auto a = run();
  const auto b = run();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("config validation") {
  MclConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.lambda = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.d_th = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.ess_threshold_fraction = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.motion_noise.sigma_x = -0.1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

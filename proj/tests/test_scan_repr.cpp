#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "radarloc/error.hpp"
#include "radarloc/scan_repr.hpp"

using namespace radarloc;

TEST_CASE("range image invariants are enforced") {
  CHECK_THROWS_AS(RangeImage(4, 2, 0.25, std::vector<std::uint8_t>(8)), ConfigError);
  CHECK_THROWS_AS(RangeImage(4, 4, 0.0, std::vector<std::uint8_t>(16)), ConfigError);
  CHECK_THROWS_AS(RangeImage(4, 4, 0.25, std::vector<std::uint8_t>(15)), ConfigError);
  CHECK_NOTHROW(RangeImage(4, 4, 0.25, std::vector<std::uint8_t>(16)));
}

TEST_CASE("image_to_cloud examples") {
  RangeImage blank(512, 0.25);
  CHECK(image_to_cloud(blank, 1).empty());

  RangeImage one(512, 0.25);
  one.set(255, 255, 200);
  const PointCloud2 c = image_to_cloud(one, 128);
  REQUIRE(c.size() == 1);
  CHECK(c[0].x == doctest::Approx(-0.125));
  CHECK(c[0].y == doctest::Approx(0.125));

  CHECK(image_to_cloud(one, 201).empty());
  CHECK_THROWS_AS(image_to_cloud(one, 256), ConfigError);
}

TEST_CASE("image_to_cloud emits one point per lit pixel in row-major order") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> px(0, 255);
  std::vector<std::uint8_t> pixels(64 * 64);
  for (auto& v : pixels) v = static_cast<std::uint8_t>(px(rng));
  const RangeImage img(64, 64, 0.5, pixels);
  for (int threshold : {0, 1, 128, 255}) {
    const PointCloud2 c = image_to_cloud(img, threshold);
    std::size_t expected = 0;
    for (auto v : pixels) expected += v >= threshold ? 1 : 0;
    CHECK(c.size() == expected);
    for (std::size_t i = 1; i < c.size(); ++i) {
      // row-major: y never increases, and x increases within a row
      CHECK((c[i].y < c[i - 1].y || (c[i].y == c[i - 1].y && c[i].x > c[i - 1].x)));
    }
  }
}

TEST_CASE("cloud_to_image examples") {
  const RangeImage empty = cloud_to_image(PointCloud2{}, 512, 0.25);
  for (auto v : empty.pixels()) CHECK(v == 0);

  const RangeImage one = cloud_to_image(PointCloud2({{0.0, 0.0}}), 512, 0.25);
  std::size_t lit = 0;
  for (auto v : one.pixels()) lit += v == 255 ? 1 : 0;
  CHECK(lit == 1);
  CHECK(one.at(256, 256) == 255);

  const RangeImage far = cloud_to_image(PointCloud2({{70.0, 0.0}}), 512, 0.25);
  for (auto v : far.pixels()) CHECK(v == 0);

  CHECK_THROWS_AS(cloud_to_image(PointCloud2{}, 511, 0.25), ConfigError);
}

TEST_CASE("cloud -> image -> cloud stays within the quantization bound") {
  std::mt19937_64 rng(21);
  const double r = 0.25;
  const auto pts = oracle::random_points(rng, 500, -63.9, 63.9);
  const PointCloud2 back = image_to_cloud(cloud_to_image(PointCloud2(pts), 512, r), 128);
  for (const Point2& p : pts) {
    double best = INFINITY;
    for (const Point2& q : back) best = std::min(best, distance(p, q));
    CHECK(best <= r / std::sqrt(2.0) + 1e-12);
  }
}

TEST_CASE("image -> cloud -> image reproduces the thresholded pixel set") {
  std::mt19937_64 rng(4);
  std::bernoulli_distribution lit(0.05);
  for (double r : {0.25, 0.1, 0.37}) {
    std::vector<std::uint8_t> pixels(128 * 128);
    for (auto& v : pixels) v = lit(rng) ? 255 : 0;
    const RangeImage img(128, 128, r, pixels);
    const RangeImage again = cloud_to_image(image_to_cloud(img, 128), 128, r);
    CHECK(again == img);
  }
}

TEST_CASE("range_filter") {
  const PointCloud2 c({{64, 0}, {64.1, 0}});
  const PointCloud2 f = range_filter(c, 64.0);
  REQUIRE(f.size() == 1);
  CHECK(f[0] == Point2{64, 0});
  CHECK(range_filter(c, INFINITY).size() == 2);
  CHECK_THROWS_AS(range_filter(c, 0.0), ConfigError);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud2 cloud(oracle::random_points(rng, 300, -80, 80));
    const PointCloud2 once = range_filter(cloud, 50.0);
    std::size_t brute = 0;
    for (const Point2& p : cloud) brute += std::sqrt(p.x * p.x + p.y * p.y) <= 50.0 ? 1 : 0;
    CHECK(once.size() == brute);
    const PointCloud2 twice = range_filter(once, 50.0);
    REQUIRE(twice.size() == once.size());
    for (std::size_t i = 0; i < once.size(); ++i) CHECK(twice[i] == once[i]);
  }
}

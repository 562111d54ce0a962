#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "radarloc/kernels.hpp"

using namespace radarloc;

TEST_CASE("parallel matched counts agree with the serial reference and brute force") {
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> pos(-5, 5), yaw(-3.1, 3.1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto map_pts = oracle::random_points(rng, 1500, -25, 25);
    const auto scan_pts = oracle::random_points(rng, 120, -20, 20);
    const PointMap map{PointCloud2(map_pts)};
    const PointCloud2 scan(scan_pts);
    std::vector<Pose2> poses;
    for (int i = 0; i < 64; ++i) poses.emplace_back(pos(rng), pos(rng), yaw(rng));

    const auto par = kernels::matched_counts(map, scan, poses, 0.8);
    const auto ser = kernels::matched_counts_serial(map, scan, poses, 0.8);
    CHECK(par == ser);
    for (std::size_t i = 0; i < poses.size(); i += 8) {
      std::vector<Point2> placed;
      for (const Point2& p : scan_pts) {
        placed.push_back(oracle::rigid(poses[i].x(), poses[i].y(), poses[i].yaw(), p));
      }
      CHECK(par[i] == oracle::matched_count(map_pts, placed, 0.8));
    }
  }
}

TEST_CASE("parallel nearest distances agree with the serial reference") {
  std::mt19937_64 rng(5);
  const auto pts = oracle::random_points(rng, 5000, -100, 100);
  const KdTree2 tree(pts);
  const auto qs = oracle::random_points(rng, 2000, -120, 120);
  const auto par = kernels::nearest_distances(tree, qs);
  CHECK(par == kernels::nearest_distances_serial(tree, qs));
  for (std::size_t i = 0; i < qs.size(); i += 97) {
    CHECK(par[i] == oracle::nearest_distance(pts, qs[i]));
  }
  const auto nn = kernels::nearest_neighbors(tree, qs);
  const auto nn_ser = kernels::nearest_neighbors_serial(tree, qs);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    CHECK(nn[i].index == nn_ser[i].index);
    CHECK(nn[i].squared_distance == nn_ser[i].squared_distance);
  }
}

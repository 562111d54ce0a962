// Serial vs OpenMP timing for the particle-weighting and nearest-neighbour
// kernels on the default corridor world. Usage: bench_kernels [particles] [reps]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "radarloc/kernels.hpp"
#include "radarloc/mcl.hpp"
#include "radarloc/surrogate.hpp"
#include "radarloc/world.hpp"

using namespace radarloc;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    best = std::min(best, s);
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-20s serial %9.3f ms  openmp %9.3f ms  speedup %5.2fx  %s\n", name, serial * 1e3,
              parallel * 1e3, serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n_particles = argc > 1 ? std::stoul(argv[1]) : 2000;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 5;

  const CorridorLoopSpec spec;
  const PointMap map(make_corridor_world(spec));
  const Pose2 truth = centreline_pose(spec, 10.0);
  const PointCloud2 scan = simulate_scan(map, truth, 64.0, deg_to_rad(1.0));
  const ParticleSet ps = init_particles(truth, {1.0, 1.0, 0.1}, n_particles, 1);
  const std::vector<Pose2> poses = ps.poses();

  std::printf("threads %d, map %zu points, scan %zu points, particles %zu\n",
              omp_get_max_threads(), map.cloud().size(), scan.size(), n_particles);

  std::vector<std::size_t> a, b;
  const double t_serial = best_of(reps, [&] { a = kernels::matched_counts_serial(map, scan, poses, 1.0); });
  const double t_omp = best_of(reps, [&] { b = kernels::matched_counts(map, scan, poses, 1.0); });
  report("matched_counts", t_serial, t_omp, a == b);

  std::vector<Point2> queries;
  for (const Pose2& p : poses)
    for (const Point2& q : scan) queries.push_back(p.apply(q));
  std::vector<double> da, db;
  const double n_serial =
      best_of(reps, [&] { da = kernels::nearest_distances_serial(map.index(), queries); });
  const double n_omp = best_of(reps, [&] { db = kernels::nearest_distances(map.index(), queries); });
  report("nearest_distances", n_serial, n_omp, da == db);
  return 0;
}

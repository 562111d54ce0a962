#include "radarloc/icp.hpp"

#include <cmath>

#include "radarloc/error.hpp"
#include "radarloc/kernels.hpp"
#include "radarloc/map_index.hpp"

namespace radarloc {

void IcpParams::validate() const {
  if (max_iterations <= 0) throw ConfigError("icp.max_iterations must be positive");
  if (!(convergence_eps_translation > 0.0) || !(convergence_eps_rotation > 0.0)) {
    throw ConfigError("icp convergence epsilons must be positive");
  }
  if (!(max_correspondence_dist > 0.0)) {
    throw ConfigError("icp.max_correspondence_dist must be positive");
  }
  if (min_correspondences < 3) throw ConfigError("icp.min_correspondences must be >= 3");
}

IcpParams IcpParams::session_registration() {
  IcpParams p;
  p.max_iterations = 200;
  p.max_correspondence_dist = 10.0;
  p.convergence_eps_translation = 1e-7;
  p.convergence_eps_rotation = 1e-7;
  return p;
}

Pose2 best_rigid_transform(std::span<const PointPair> pairs) {
  if (pairs.size() < 2) throw DegenerateGeometryError("need at least two point pairs");
  const double n = static_cast<double>(pairs.size());
  Point2 cs{}, ct{};
  for (const auto& [s, t] : pairs) {
    cs.x += s.x;
    cs.y += s.y;
    ct.x += t.x;
    ct.y += t.y;
  }
  cs = {cs.x / n, cs.y / n};
  ct = {ct.x / n, ct.y / n};

  double dot = 0.0;
  double cross = 0.0;
  double spread = 0.0;
  for (const auto& [s, t] : pairs) {
    const Point2 a{s.x - cs.x, s.y - cs.y};
    const Point2 b{t.x - ct.x, t.y - ct.y};
    dot += a.x * b.x + a.y * b.y;
    cross += a.x * b.y - a.y * b.x;
    spread += squared_norm(a);
  }
  if (!(spread > 0.0)) throw DegenerateGeometryError("all source points coincide");

  const double yaw = std::atan2(cross, dot);
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {ct.x - (c * cs.x - s * cs.y), ct.y - (s * cs.x + c * cs.y), yaw};
}

IcpResult icp_align(const PointCloud2& source, const PointCloud2& target, const Pose2& init,
                    const IcpParams& params) {
  params.validate();
  if (source.size() < params.min_correspondences || target.size() < params.min_correspondences) {
    throw CorrespondenceError("ICP input clouds have fewer than min_correspondences points");
  }
  const KdTree2 index(target.points());
  const double gate_sq = params.max_correspondence_dist * params.max_correspondence_dist;

  IcpResult result;
  result.transform = init;
  std::vector<PointPair> pairs;
  pairs.reserve(source.size());

  for (int iter = 1; iter <= params.max_iterations; ++iter) {
    const PointCloud2 moved = transform_cloud(result.transform, source, target.frame());
    const auto nn = kernels::nearest_neighbors(index, moved.points());
    pairs.clear();
    for (std::size_t i = 0; i < nn.size(); ++i) {
      if (nn[i].squared_distance <= gate_sq) pairs.emplace_back(moved[i], target[nn[i].index]);
    }
    if (pairs.size() < params.min_correspondences) {
      throw CorrespondenceError("ICP correspondence starvation: " + std::to_string(pairs.size()) +
                                " pairs survived the " +
                                std::to_string(params.max_correspondence_dist) + " m gate");
    }

    const Pose2 delta = best_rigid_transform(pairs);
    result.transform = compose(delta, result.transform);
    result.iterations = iter;
    result.correspondence_count = pairs.size();

    double sse = 0.0;
    for (const auto& [s, t] : pairs) {
      const Point2 m = delta.apply(s);
      sse += (m.x - t.x) * (m.x - t.x) + (m.y - t.y) * (m.y - t.y);
    }
    result.rms_residual = std::sqrt(sse / static_cast<double>(pairs.size()));
    result.rms_history.push_back(result.rms_residual);

    if (std::hypot(delta.x(), delta.y()) < params.convergence_eps_translation &&
        std::abs(delta.yaw()) < params.convergence_eps_rotation) {
      result.converged = true;
      break;
    }
  }
  return result;
}

IcpResult register_session(const PointCloud2& map_a, const PointCloud2& map_b,
                           const Pose2& init) {
  if (map_a.empty() || map_b.empty()) throw DataError("session maps must be non-empty");
  return icp_align(map_b, map_a, init, IcpParams::session_registration());
}

}  // namespace radarloc

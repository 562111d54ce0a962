#include "radarloc/geometry.hpp"

#include <cmath>

#include "radarloc/error.hpp"

namespace radarloc {

double wrap_angle(double a) {
  double r = std::fmod(a + kPi, 2.0 * kPi);
  if (r <= 0.0) r += 2.0 * kPi;
  return r - kPi;
}

double norm(Point2 p) { return std::hypot(p.x, p.y); }

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

Pose2::Pose2(double x, double y, double yaw) : x_(x), y_(y), yaw_(wrap_angle(yaw)) {}

Point2 Pose2::apply(Point2 p) const {
  const double c = std::cos(yaw_);
  const double s = std::sin(yaw_);
  return {c * p.x - s * p.y + x_, s * p.x + c * p.y + y_};
}

Pose2 compose(const Pose2& a, const Pose2& b) {
  const Point2 t = a.apply({b.x(), b.y()});
  return {t.x, t.y, a.yaw() + b.yaw()};
}

Pose2 inverse(const Pose2& p) {
  const double c = std::cos(p.yaw());
  const double s = std::sin(p.yaw());
  return {-(c * p.x() + s * p.y()), -(-s * p.x() + c * p.y()), -p.yaw()};
}

PointCloud2::PointCloud2(std::vector<Point2> points, std::string frame)
    : points_(std::move(points)), frame_(std::move(frame)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
      throw DataError("point " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
}

PointCloud2 transform_cloud(const Pose2& p, const PointCloud2& c,
                            const std::string& target_frame) {
  std::vector<Point2> out;
  out.reserve(c.size());
  const double cs = std::cos(p.yaw());
  const double sn = std::sin(p.yaw());
  for (const Point2& q : c) {
    out.push_back({cs * q.x - sn * q.y + p.x(), sn * q.x + cs * q.y + p.y()});
  }
  return PointCloud2(std::move(out), target_frame);
}

}  // namespace radarloc

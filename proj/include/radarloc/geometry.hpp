#pragma once

#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace radarloc {

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double squared_norm(Point2 p) { return p.x * p.x + p.y * p.y; }
double norm(Point2 p);
double distance(Point2 a, Point2 b);

/// Planar rigid transform. Yaw is counter-clockwise positive and always
/// kept wrapped to (-pi, pi].
class Pose2 {
 public:
  Pose2() = default;
  Pose2(double x, double y, double yaw);

  static Pose2 identity() { return {}; }

  double x() const { return x_; }
  double y() const { return y_; }
  double yaw() const { return yaw_; }

  /// Applies the transform to a point: rotate by yaw, then translate.
  Point2 apply(Point2 p) const;

  friend bool operator==(const Pose2&, const Pose2&) = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
  double yaw_ = 0.0;
};

/// SE(2) product: the pose of frame b expressed after applying a.
Pose2 compose(const Pose2& a, const Pose2& b);
Pose2 inverse(const Pose2& p);

/// Ordered 2D points tagged with a frame label. All coordinates finite.
class PointCloud2 {
 public:
  PointCloud2() = default;
  /// Throws DataError if any coordinate is NaN or infinite.
  explicit PointCloud2(std::vector<Point2> points, std::string frame = "sensor");

  std::span<const Point2> points() const { return points_; }
  const std::string& frame() const { return frame_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point2& operator[](std::size_t i) const { return points_[i]; }

  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

 private:
  std::vector<Point2> points_;
  std::string frame_ = "sensor";
};

/// Rotates every point by p.yaw then translates by (p.x, p.y). Index order
/// is preserved; the result carries `target_frame`.
PointCloud2 transform_cloud(const Pose2& p, const PointCloud2& c,
                            const std::string& target_frame = "world");

}  // namespace radarloc

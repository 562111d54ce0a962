#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radarloc/geometry.hpp"
#include "radarloc/world.hpp"

namespace radarloc {

/// Timestamped poses with strictly increasing, non-empty timestamps.
class Trajectory {
 public:
  /// Throws DataError when empty or when timestamps do not strictly increase.
  explicit Trajectory(std::vector<TimedPose> samples);

  std::span<const TimedPose> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const TimedPose& operator[](std::size_t i) const { return samples_[i]; }

 private:
  std::vector<TimedPose> samples_;
};

/// CSV `t,x,y,yaw` (seconds, metres, metres, radians). The parser returns the
/// raw rows; an empty body is legal here and rejected by Trajectory.
std::vector<TimedPose> parse_trajectory_csv(std::string_view text);
Trajectory read_trajectory_csv(const std::filesystem::path& path);
void write_trajectory_csv(std::ostream& out, std::span<const TimedPose> samples);
void write_trajectory_csv(const std::filesystem::path& path, std::span<const TimedPose> samples);

struct PosePair {
  double t = 0.0;  // estimate timestamp
  Pose2 estimate;
  Pose2 truth;
};

struct Association {
  std::vector<PosePair> pairs;
  std::size_t unmatched = 0;
};

/// Pairs each estimate with the nearest-timestamp ground-truth sample within
/// max_dt (inclusive). Throws DataError when nothing pairs.
Association associate(const Trajectory& est, const Trajectory& gt, double max_dt = 0.1);

struct PoseErrors {
  double position = 0.0;  // metres
  double yaw_deg = 0.0;   // wrapped, absolute
};

PoseErrors pose_errors(const PosePair& p);

struct Rmse {
  double positional = 0.0;  // metres
  double yaw_deg = 0.0;
};

/// Precondition: at least one pair.
Rmse rmse(std::span<const PosePair> pairs);

struct ErrorBucket {
  double pos_th = 0.0;  // metres
  double yaw_th = 0.0;  // degrees
};

/// (1 m, 2 deg), (2 m, 5 deg), (5 m, 10 deg).
std::vector<ErrorBucket> default_buckets();

/// Per bucket, the fraction of pairs with position error < pos_th and
/// |yaw error| < yaw_th.
std::vector<double> error_distribution(std::span<const PosePair> pairs,
                                       std::span<const ErrorBucket> buckets);

struct ErrorReport {
  double positional_rmse = 0.0;
  double yaw_rmse = 0.0;  // degrees
  std::vector<ErrorBucket> buckets;
  std::vector<double> bucket_fractions;
  std::size_t n_evaluated = 0;
  std::size_t n_unmatched = 0;
  std::size_t n_excluded = 0;  // estimates flagged lost/degenerate
};

struct EvalOptions {
  double max_dt = 0.1;
  std::vector<ErrorBucket> buckets = default_buckets();
};

/// Associates, drops the pairs whose estimate timestamp appears in
/// `excluded_times`, then computes RMSE and bucket fractions.
ErrorReport evaluate(const Trajectory& est, const Trajectory& gt, const EvalOptions& opts = {},
                     std::span<const double> excluded_times = {});

/// `key = value` lines.
void write_report_text(std::ostream& out, const ErrorReport& r);
/// Header plus a single data row.
void write_report_csv(std::ostream& out, const ErrorReport& r);

}  // namespace radarloc

#include "radarloc/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "radarloc/cloud_io.hpp"
#include "radarloc/error.hpp"

namespace radarloc {

Trajectory::Trajectory(std::vector<TimedPose> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw DataError("trajectory is empty");
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(samples_[i].t > samples_[i - 1].t)) {
      throw DataError("trajectory timestamps must strictly increase (row " + std::to_string(i + 1) +
                      ")");
    }
  }
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_fields(std::string_view line, double (&v)[4]) {
  for (int i = 0; i < 4; ++i) {
    const auto comma = line.find(',');
    if ((i < 3) == (comma == std::string_view::npos)) return false;
    std::string_view field = trim(line.substr(0, comma));
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v[i]);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v[i])) {
      return false;
    }
    line = i < 3 ? line.substr(comma + 1) : std::string_view{};
  }
  return true;
}

}  // namespace

std::vector<TimedPose> parse_trajectory_csv(std::string_view text) {
  std::vector<TimedPose> out;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "t,x,y,yaw") {
        throw DataError("line " + std::to_string(line_no) + ": expected header 't,x,y,yaw'");
      }
      saw_header = true;
      continue;
    }
    double v[4];
    if (!parse_fields(line, v)) {
      throw DataError("line " + std::to_string(line_no) + ": malformed trajectory row '" +
                      std::string(line) + "'");
    }
    out.push_back({v[0], Pose2(v[1], v[2], v[3])});
  }
  if (!saw_header) throw DataError("line 1: missing header 't,x,y,yaw'");
  return out;
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  try {
    return Trajectory(parse_trajectory_csv(read_file(path)));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_trajectory_csv(std::ostream& out, std::span<const TimedPose> samples) {
  out << "t,x,y,yaw\n";
  for (const TimedPose& s : samples) {
    out << format_number(s.t) << ',' << format_number(s.pose.x()) << ','
        << format_number(s.pose.y()) << ',' << format_number(s.pose.yaw()) << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, std::span<const TimedPose> samples) {
  std::ofstream out(path, std::ios::out | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  write_trajectory_csv(out, samples);
}

Association associate(const Trajectory& est, const Trajectory& gt, double max_dt) {
  if (!(max_dt >= 0.0)) throw ConfigError("max_dt must be >= 0");
  const auto gts = gt.samples();
  Association a;
  for (const TimedPose& e : est.samples()) {
    const auto it = std::lower_bound(gts.begin(), gts.end(), e.t,
                                     [](const TimedPose& g, double t) { return g.t < t; });
    // Nearest of the two neighbours; ties go to the earlier sample.
    const TimedPose* best = nullptr;
    if (it != gts.end()) best = &*it;
    if (it != gts.begin()) {
      const TimedPose* prev = &*(it - 1);
      if (best == nullptr || e.t - prev->t <= best->t - e.t) best = prev;
    }
    if (best != nullptr && std::abs(best->t - e.t) <= max_dt) {
      a.pairs.push_back({e.t, e.pose, best->pose});
    } else {
      ++a.unmatched;
    }
  }
  if (a.pairs.empty()) throw DataError("no estimate lies within max_dt of a ground-truth sample");
  return a;
}

PoseErrors pose_errors(const PosePair& p) {
  return {std::hypot(p.estimate.x() - p.truth.x(), p.estimate.y() - p.truth.y()),
          std::abs(rad_to_deg(wrap_angle(p.estimate.yaw() - p.truth.yaw())))};
}

Rmse rmse(std::span<const PosePair> pairs) {
  if (pairs.empty()) throw DataError("rmse needs at least one pair");
  double sp = 0.0;
  double sy = 0.0;
  for (const PosePair& p : pairs) {
    const double dx = p.estimate.x() - p.truth.x();
    const double dy = p.estimate.y() - p.truth.y();
    const double dyaw = wrap_angle(p.estimate.yaw() - p.truth.yaw());
    sp += dx * dx + dy * dy;
    sy += dyaw * dyaw;
  }
  const double n = static_cast<double>(pairs.size());
  return {std::sqrt(sp / n), rad_to_deg(std::sqrt(sy / n))};
}

std::vector<ErrorBucket> default_buckets() { return {{1.0, 2.0}, {2.0, 5.0}, {5.0, 10.0}}; }

std::vector<double> error_distribution(std::span<const PosePair> pairs,
                                       std::span<const ErrorBucket> buckets) {
  std::vector<double> out(buckets.size(), 0.0);
  if (pairs.empty()) return out;
  std::vector<std::size_t> hits(buckets.size(), 0);
  for (const PosePair& p : pairs) {
    const PoseErrors e = pose_errors(p);
    for (std::size_t b = 0; b < buckets.size(); ++b) {
      if (e.position < buckets[b].pos_th && e.yaw_deg < buckets[b].yaw_th) ++hits[b];
    }
  }
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    out[b] = static_cast<double>(hits[b]) / static_cast<double>(pairs.size());
  }
  return out;
}

ErrorReport evaluate(const Trajectory& est, const Trajectory& gt, const EvalOptions& opts,
                     std::span<const double> excluded_times) {
  for (std::size_t b = 1; b < opts.buckets.size(); ++b) {
    if (opts.buckets[b].pos_th < opts.buckets[b - 1].pos_th ||
        opts.buckets[b].yaw_th < opts.buckets[b - 1].yaw_th) {
      throw ConfigError("error buckets must be sorted ascending in both thresholds");
    }
  }
  Association a = associate(est, gt, opts.max_dt);
  ErrorReport r;
  r.n_unmatched = a.unmatched;
  std::vector<PosePair> kept;
  kept.reserve(a.pairs.size());
  for (const PosePair& p : a.pairs) {
    if (std::find(excluded_times.begin(), excluded_times.end(), p.t) != excluded_times.end()) {
      ++r.n_excluded;
    } else {
      kept.push_back(p);
    }
  }
  if (kept.empty()) throw DataError("every associated estimate was excluded");
  const Rmse e = rmse(kept);
  r.positional_rmse = e.positional;
  r.yaw_rmse = e.yaw_deg;
  r.buckets = opts.buckets;
  r.bucket_fractions = error_distribution(kept, opts.buckets);
  r.n_evaluated = kept.size();
  return r;
}

namespace {

std::string bucket_label(const ErrorBucket& b) {
  return format_number(b.pos_th) + "m_" + format_number(b.yaw_th) + "deg";
}

}  // namespace

void write_report_text(std::ostream& out, const ErrorReport& r) {
  out << "positional_rmse_m = " << format_number(r.positional_rmse) << '\n'
      << "yaw_rmse_deg = " << format_number(r.yaw_rmse) << '\n';
  for (std::size_t b = 0; b < r.buckets.size(); ++b) {
    out << "within_" << bucket_label(r.buckets[b]) << " = "
        << format_number(r.bucket_fractions[b]) << '\n';
  }
  out << "n_evaluated = " << r.n_evaluated << '\n'
      << "n_unmatched = " << r.n_unmatched << '\n'
      << "n_excluded = " << r.n_excluded << '\n';
}

void write_report_csv(std::ostream& out, const ErrorReport& r) {
  out << "positional_rmse_m,yaw_rmse_deg";
  for (const ErrorBucket& b : r.buckets) out << ",within_" << bucket_label(b);
  out << ",n_evaluated,n_unmatched,n_excluded\n";
  out << format_number(r.positional_rmse) << ',' << format_number(r.yaw_rmse);
  for (double f : r.bucket_fractions) out << ',' << format_number(f);
  out << ',' << r.n_evaluated << ',' << r.n_unmatched << ',' << r.n_excluded << '\n';
}

}  // namespace radarloc

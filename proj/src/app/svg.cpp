#include "radarloc/app/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace radarloc::app {

namespace {

constexpr double kPanel = 360.0;
constexpr double kMargin = 30.0;
constexpr int kBins = 20;

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

struct Frame {
  double min_x, min_y, scale, origin_x, origin_y;

  std::string map(double x, double y) const {
    return fixed(origin_x + (x - min_x) * scale) + "," +
           fixed(origin_y + kPanel - (y - min_y) * scale);
  }
};

void polyline(std::ostringstream& o, std::span<const TimedPose> poses, const Frame& f,
              const char* colour, const char* id) {
  o << "  <polyline id=\"" << id << "\" fill=\"none\" stroke=\"" << colour
    << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < poses.size(); ++i) {
    if (i > 0) o << ' ';
    o << f.map(poses[i].pose.x(), poses[i].pose.y());
  }
  o << "\"/>\n";
}

void histogram(std::ostringstream& o, const std::vector<double>& values, double origin_x,
               const char* title, const char* unit) {
  double hi = 0.0;
  for (double v : values) hi = std::max(hi, v);
  if (!(hi > 0.0)) hi = 1.0;
  std::vector<int> counts(kBins, 0);
  for (double v : values) {
    const int b = std::min(kBins - 1, static_cast<int>(std::floor(v / hi * kBins)));
    ++counts[static_cast<std::size_t>(b)];
  }
  const int peak = std::max(1, *std::max_element(counts.begin(), counts.end()));
  const double bar_w = kPanel / kBins;
  o << "  <g class=\"histogram\">\n"
    << "    <text x=\"" << fixed(origin_x) << "\" y=\"" << fixed(kMargin - 8)
    << "\" font-size=\"12\">" << title << " (0 to " << fixed(hi) << ' ' << unit << ")</text>\n"
    << "    <rect x=\"" << fixed(origin_x) << "\" y=\"" << fixed(kMargin) << "\" width=\""
    << fixed(kPanel) << "\" height=\"" << fixed(kPanel)
    << "\" fill=\"none\" stroke=\"#888888\"/>\n";
  for (int b = 0; b < kBins; ++b) {
    const double h = kPanel * counts[static_cast<std::size_t>(b)] / peak;
    o << "    <rect x=\"" << fixed(origin_x + b * bar_w) << "\" y=\""
      << fixed(kMargin + kPanel - h) << "\" width=\"" << fixed(bar_w - 1.0) << "\" height=\""
      << fixed(h) << "\" fill=\"#4477aa\"/>\n";
  }
  o << "  </g>\n";
}

}  // namespace

std::string render_evaluation_svg(std::span<const TimedPose> estimate,
                                  std::span<const TimedPose> truth,
                                  std::span<const PosePair> pairs) {
  double min_x = 0.0, min_y = 0.0, max_x = 1.0, max_y = 1.0;
  bool first = true;
  for (auto set : {estimate, truth}) {
    for (const TimedPose& s : set) {
      if (first) {
        min_x = max_x = s.pose.x();
        min_y = max_y = s.pose.y();
        first = false;
      }
      min_x = std::min(min_x, s.pose.x());
      max_x = std::max(max_x, s.pose.x());
      min_y = std::min(min_y, s.pose.y());
      max_y = std::max(max_y, s.pose.y());
    }
  }
  const double extent = std::max({max_x - min_x, max_y - min_y, 1e-6});
  const Frame f{min_x, min_y, kPanel / extent, kMargin, kMargin};

  std::vector<double> pos_err, yaw_err;
  for (const PosePair& p : pairs) {
    const PoseErrors e = pose_errors(p);
    pos_err.push_back(e.position);
    yaw_err.push_back(e.yaw_deg);
  }

  const double width = 3 * kPanel + 4 * kMargin;
  const double height = kPanel + 2 * kMargin;
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width) << "\" height=\""
    << fixed(height) << "\" viewBox=\"0 0 " << fixed(width) << ' ' << fixed(height) << "\">\n"
    << "  <rect x=\"0\" y=\"0\" width=\"" << fixed(width) << "\" height=\"" << fixed(height)
    << "\" fill=\"white\"/>\n"
    << "  <text x=\"" << fixed(kMargin) << "\" y=\"" << fixed(kMargin - 8)
    << "\" font-size=\"12\">trajectory (black: ground truth, red: estimate)</text>\n";
  polyline(o, truth, f, "black", "ground_truth");
  polyline(o, estimate, f, "red", "estimate");
  histogram(o, pos_err, 2 * kMargin + kPanel, "position error", "m");
  histogram(o, yaw_err, 3 * kMargin + 2 * kPanel, "heading error", "deg");
  o << "</svg>\n";
  return o.str();
}

}  // namespace radarloc::app

#include "radarloc/app/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "radarloc/cloud_io.hpp"
#include "radarloc/error.hpp"

namespace radarloc::app {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  std::string_view s = v;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(out)) {
    throw ConfigError(key + ": expected a finite number, got '" + v + "'");
  }
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || key.find('.') == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": keys take the form section.key");
    }
    if (!out.emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key " + key);
    }
  }
  return out;
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  auto resolve = [&](const std::string& v) {
    std::filesystem::path p(v);
    return p.is_absolute() ? p : base_dir / p;
  };

  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto num = [](double& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = to_double(k, v); };
  };
  double init_x = 0.0, init_y = 0.0, init_yaw = 0.0, resolution = 0.0;
  bool has_resolution = false;
  const std::map<std::string, Setter> setters = {
      {"map.path", [&](auto&, auto& v) { cfg.map_path = resolve(v); }},
      {"scans.manifest", [&](auto&, auto& v) { cfg.manifest_path = resolve(v); }},
      {"scans.pgm_threshold",
       [&](auto& k, auto& v) { cfg.pgm_threshold = static_cast<int>(to_uint(k, v)); }},
      {"scans.pgm_resolution",
       [&](auto& k, auto& v) {
         resolution = to_double(k, v);
         has_resolution = true;
       }},
      {"scans.max_range", num(cfg.scan_max_range)},
      {"init.mode",
       [&](auto& k, auto& v) {
         if (v == "gaussian") {
           cfg.init_mode = InitMode::kGaussian;
         } else if (v == "uniform") {
           cfg.init_mode = InitMode::kUniform;
         } else {
           throw ConfigError(k + ": expected 'gaussian' or 'uniform'");
         }
       }},
      {"init.x", num(init_x)},
      {"init.y", num(init_y)},
      {"init.yaw", num(init_yaw)},
      {"init.sigma_x", num(cfg.initial_spread.sigma_x)},
      {"init.sigma_y", num(cfg.initial_spread.sigma_y)},
      {"init.sigma_yaw", num(cfg.initial_spread.sigma_yaw)},
      {"mcl.n_particles",
       [&](auto& k, auto& v) { cfg.mcl.n_particles = static_cast<std::size_t>(to_uint(k, v)); }},
      {"mcl.lambda", num(cfg.mcl.lambda)},
      {"mcl.d_th", num(cfg.mcl.d_th)},
      {"mcl.ess_threshold_fraction", num(cfg.mcl.ess_threshold_fraction)},
      {"mcl.seed", [&](auto& k, auto& v) { cfg.mcl.rng_seed = to_uint(k, v); }},
      {"mcl.lost_window",
       [&](auto& k, auto& v) { cfg.mcl.lost_window = static_cast<std::size_t>(to_uint(k, v)); }},
      {"motion.sigma_x", num(cfg.mcl.motion_noise.sigma_x)},
      {"motion.sigma_y", num(cfg.mcl.motion_noise.sigma_y)},
      {"motion.sigma_yaw", num(cfg.mcl.motion_noise.sigma_yaw)},
      {"motion.alpha_trans", num(cfg.mcl.motion_noise.alpha_trans)},
      {"motion.alpha_rot", num(cfg.mcl.motion_noise.alpha_rot)},
      {"icp.max_iterations",
       [&](auto& k, auto& v) { cfg.icp.max_iterations = static_cast<int>(to_uint(k, v)); }},
      {"icp.eps_translation", num(cfg.icp.convergence_eps_translation)},
      {"icp.eps_rotation", num(cfg.icp.convergence_eps_rotation)},
      {"icp.max_correspondence_dist", num(cfg.icp.max_correspondence_dist)},
      {"icp.min_correspondences",
       [&](auto& k, auto& v) {
         cfg.icp.min_correspondences = static_cast<std::size_t>(to_uint(k, v));
       }},
      {"output.dir", [&](auto&, auto& v) { cfg.output_dir = resolve(v); }},
  };

  for (const auto& [key, value] : parse_key_values(text)) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(key, value);
  }
  cfg.initial_pose = Pose2(init_x, init_y, init_yaw);
  if (has_resolution) cfg.pgm_resolution = resolution;

  if (cfg.map_path.empty()) throw ConfigError("map.path is required");
  if (cfg.manifest_path.empty()) throw ConfigError("scans.manifest is required");
  if (cfg.output_dir.empty()) throw ConfigError("output.dir is required");
  if (!std::filesystem::is_regular_file(cfg.map_path)) {
    throw ConfigError("map file not found: " + cfg.map_path.string());
  }
  if (!std::filesystem::is_regular_file(cfg.manifest_path)) {
    throw ConfigError("scan manifest not found: " + cfg.manifest_path.string());
  }
  if (cfg.pgm_threshold < 0 || cfg.pgm_threshold > 255) {
    throw ConfigError("scans.pgm_threshold must lie in [0, 255]");
  }
  if (cfg.pgm_resolution && !(*cfg.pgm_resolution > 0.0)) {
    throw ConfigError("scans.pgm_resolution must be positive");
  }
  if (!(cfg.scan_max_range > 0.0)) throw ConfigError("scans.max_range must be positive");
  for (double s : {cfg.initial_spread.sigma_x, cfg.initial_spread.sigma_y,
                   cfg.initial_spread.sigma_yaw}) {
    if (!(s >= 0.0)) throw ConfigError("init spreads must be >= 0");
  }
  cfg.mcl.validate();
  cfg.icp.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return parse_run_config(text, path.parent_path());
}

std::string format_run_config(const RunConfig& cfg) {
  std::ostringstream o;
  auto f = [](double v) { return format_number(v); };
  o << "map.path = " << cfg.map_path.string() << '\n'
    << "scans.manifest = " << cfg.manifest_path.string() << '\n'
    << "scans.pgm_threshold = " << cfg.pgm_threshold << '\n';
  if (cfg.pgm_resolution) o << "scans.pgm_resolution = " << f(*cfg.pgm_resolution) << '\n';
  o << "scans.max_range = " << f(cfg.scan_max_range) << '\n'
    << "init.mode = " << (cfg.init_mode == InitMode::kGaussian ? "gaussian" : "uniform") << '\n'
    << "init.x = " << f(cfg.initial_pose.x()) << '\n'
    << "init.y = " << f(cfg.initial_pose.y()) << '\n'
    << "init.yaw = " << f(cfg.initial_pose.yaw()) << '\n'
    << "init.sigma_x = " << f(cfg.initial_spread.sigma_x) << '\n'
    << "init.sigma_y = " << f(cfg.initial_spread.sigma_y) << '\n'
    << "init.sigma_yaw = " << f(cfg.initial_spread.sigma_yaw) << '\n'
    << "mcl.n_particles = " << cfg.mcl.n_particles << '\n'
    << "mcl.lambda = " << f(cfg.mcl.lambda) << '\n'
    << "mcl.d_th = " << f(cfg.mcl.d_th) << '\n'
    << "mcl.ess_threshold_fraction = " << f(cfg.mcl.ess_threshold_fraction) << '\n'
    << "mcl.seed = " << cfg.mcl.rng_seed << '\n'
    << "mcl.lost_window = " << cfg.mcl.lost_window << '\n'
    << "motion.sigma_x = " << f(cfg.mcl.motion_noise.sigma_x) << '\n'
    << "motion.sigma_y = " << f(cfg.mcl.motion_noise.sigma_y) << '\n'
    << "motion.sigma_yaw = " << f(cfg.mcl.motion_noise.sigma_yaw) << '\n'
    << "motion.alpha_trans = " << f(cfg.mcl.motion_noise.alpha_trans) << '\n'
    << "motion.alpha_rot = " << f(cfg.mcl.motion_noise.alpha_rot) << '\n'
    << "icp.max_iterations = " << cfg.icp.max_iterations << '\n'
    << "icp.eps_translation = " << f(cfg.icp.convergence_eps_translation) << '\n'
    << "icp.eps_rotation = " << f(cfg.icp.convergence_eps_rotation) << '\n'
    << "icp.max_correspondence_dist = " << f(cfg.icp.max_correspondence_dist) << '\n'
    << "icp.min_correspondences = " << cfg.icp.min_correspondences << '\n'
    << "output.dir = " << cfg.output_dir.string() << '\n';
  return o.str();
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<ManifestEntry> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view v = trim(line);
    if (v.empty() || v.front() == '#') continue;
    const auto sp = v.find_first_of(" \t");
    double t = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + (sp == v.npos ? v.size() : sp), t);
    if (sp == std::string_view::npos || ec != std::errc() || ptr != v.data() + sp) {
      throw DataError(path.string() + " line " + std::to_string(line_no) +
                      ": expected 'timestamp path'");
    }
    const std::string_view rel = trim(v.substr(sp));
    if (rel.empty()) {
      throw DataError(path.string() + " line " + std::to_string(line_no) + ": missing scan path");
    }
    if (!out.empty() && !(t > out.back().timestamp)) {
      throw DataError(path.string() + " line " + std::to_string(line_no) +
                      ": timestamps must strictly increase");
    }
    std::filesystem::path p{std::string(rel)};
    out.push_back({t, p.is_absolute() ? p : path.parent_path() / p});
  }
  return out;
}

}  // namespace radarloc::app

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radarloc/geometry.hpp"
#include "radarloc/icp.hpp"
#include "radarloc/mcl.hpp"

namespace radarloc::app {

/// Flat `section.key = value` text, `#` starts a comment.
std::map<std::string, std::string> parse_key_values(std::string_view text);

enum class InitMode { kGaussian, kUniform };

struct RunConfig {
  std::filesystem::path map_path;
  std::filesystem::path manifest_path;
  int pgm_threshold = 128;
  std::optional<double> pgm_resolution;
  double scan_max_range = 64.0;
  InitMode init_mode = InitMode::kGaussian;
  Pose2 initial_pose;
  PoseSpread initial_spread{0.5, 0.5, 0.05};
  MclConfig mcl;
  IcpParams icp;
  std::filesystem::path output_dir;
};

/// Parses and validates a run config; relative paths resolve against the
/// config file's directory. Throws ConfigError on unknown keys, bad values or
/// missing input files.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir);

/// Serializes a config in the format load_run_config reads.
std::string format_run_config(const RunConfig& cfg);

struct ManifestEntry {
  double timestamp = 0.0;
  std::filesystem::path path;
};

/// Lines of `timestamp path`; paths relative to the manifest's directory.
/// Timestamps must strictly increase.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

}  // namespace radarloc::app

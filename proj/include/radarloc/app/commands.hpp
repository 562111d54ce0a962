#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "radarloc/eval.hpp"
#include "radarloc/icp.hpp"
#include "radarloc/surrogate.hpp"
#include "radarloc/world.hpp"

namespace radarloc::app {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitLost = 3,
};

struct ConvertOptions {
  std::filesystem::path input;   // .pgm -> cloud, .csv -> image
  std::filesystem::path output;
  std::optional<double> resolution;
  int threshold = 128;
  int width = 512;  // raster size when writing an image
};

/// PGM to CSV cloud (or CSV cloud to PGM). Prints the point count.
void cmd_convert(const ConvertOptions& opts, std::ostream& out);

struct LocalizeSummary {
  std::size_t steps = 0;
  std::filesystem::path trajectory_path;
  std::filesystem::path diagnostics_path;
};

/// Runs the filter over the manifest's scans, writing `trajectory.csv` and
/// `diagnostics.tsv` to the output directory. On lost localization the
/// partial outputs are written before LostLocalizationError propagates.
LocalizeSummary cmd_localize(const std::filesystem::path& config_path, std::ostream& out);

struct EvalCommandOptions {
  std::filesystem::path estimate;
  std::filesystem::path truth;
  std::filesystem::path output_dir;  // receives report.txt, report.csv, plot.svg
  EvalOptions eval;
  /// Optional diagnostics log; steps flagged degenerate are excluded.
  std::optional<std::filesystem::path> diagnostics;
};

ErrorReport cmd_eval(const EvalCommandOptions& opts, std::ostream& out);

struct SimulateOptions {
  std::filesystem::path output_dir;
  CorridorLoopSpec world;
  TrajectorySpec trajectory;
  DegradeParams degrade;
  double angular_step = 0.017453292519943295;  // 1 degree
  std::uint64_t seed = 1;
  std::size_t n_particles = 500;
};

/// Writes map.csv, gt.csv, scans/*.csv, manifest.txt and a ready-to-run
/// localize.cfg into the output directory.
void cmd_simulate(const SimulateOptions& opts, std::ostream& out);

struct SimilarityOptions {
  std::filesystem::path fake;
  std::filesystem::path real;
  std::vector<double> bin_edges = default_bin_edges();
  std::optional<std::filesystem::path> output;  // histogram CSV
};

/// Writes the histogram CSV and prints the fractions within 1 m and 2 m.
DistanceHistogram cmd_similarity(const SimilarityOptions& opts, std::ostream& out);

/// `bin_lo,bin_hi,count` rows followed by an `overflow,<count>` row.
void write_histogram_csv(std::ostream& out, const DistanceHistogram& h);

struct IcpCommandOptions {
  std::filesystem::path source;
  std::filesystem::path target;
  Pose2 init;
  IcpParams params;
};

/// Prints `x y yaw_rad rms iters converged`.
IcpResult cmd_icp(const IcpCommandOptions& opts, std::ostream& out);

/// Full command-line entry point; maps errors to ExitCode values.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace radarloc::app

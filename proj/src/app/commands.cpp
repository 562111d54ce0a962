#include "radarloc/app/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "radarloc/app/config.hpp"
#include "radarloc/app/svg.hpp"
#include "radarloc/cloud_io.hpp"
#include "radarloc/error.hpp"
#include "radarloc/map_index.hpp"
#include "radarloc/mcl.hpp"
#include "radarloc/scan_repr.hpp"

namespace radarloc::app {

namespace fs = std::filesystem;

namespace {

bool has_extension(const fs::path& p, const char* ext) {
  std::string e = p.extension().string();
  for (char& c : e) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return e == ext;
}

std::ofstream open_text(const fs::path& p) {
  std::ofstream out(p, std::ios::out | std::ios::trunc | std::ios::binary);
  if (!out) throw DataError("cannot open '" + p.string() + "' for writing");
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory '" + dir.string() + "': " + ec.message());
}

PointCloud2 load_scan(const fs::path& p, const RunConfig& cfg) {
  PointCloud2 cloud = has_extension(p, ".pgm")
                          ? image_to_cloud(read_range_image(p, cfg.pgm_resolution),
                                           cfg.pgm_threshold)
                          : read_cloud_csv(p, "sensor");
  return range_filter(cloud, cfg.scan_max_range);
}

std::vector<double> excluded_times_from_diagnostics(const fs::path& diag_path,
                                                    const Trajectory& est) {
  std::istringstream in(read_file(diag_path));
  std::string line;
  std::vector<double> times;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.rfind("step", 0) == 0) continue;
    const auto tab = line.find('\t');
    const auto last_tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw DataError(diag_path.string() + " line " + std::to_string(line_no) +
                      ": malformed diagnostics row");
    }
    const std::size_t step = std::stoul(line.substr(0, tab));
    const std::string flags = line.substr(last_tab + 1);
    if (flags.find("degenerate") != std::string::npos && step < est.size()) {
      times.push_back(est[step].t);
    }
  }
  return times;
}

}  // namespace

void cmd_convert(const ConvertOptions& opts, std::ostream& out) {
  if (has_extension(opts.input, ".csv")) {
    const PointCloud2 cloud = read_cloud_csv(opts.input);
    const RangeImage img =
        cloud_to_image(cloud, opts.width, opts.resolution.value_or(kDefaultResolution));
    write_pgm(opts.output, img);
    std::size_t lit = 0;
    for (auto px : img.pixels()) lit += px != 0 ? 1 : 0;
    out << "pixels " << lit << '\n';
    return;
  }
  const RangeImage img = read_range_image(opts.input, opts.resolution);
  const PointCloud2 cloud = image_to_cloud(img, opts.threshold);
  write_cloud_csv(opts.output, cloud);
  out << "points " << cloud.size() << '\n';
}

LocalizeSummary cmd_localize(const fs::path& config_path, std::ostream& out) {
  const RunConfig cfg = load_run_config(config_path);
  const PointMap map(read_cloud_csv(cfg.map_path, "world"));
  const auto manifest = read_manifest(cfg.manifest_path);
  ensure_dir(cfg.output_dir);

  LocalizeSummary summary;
  summary.trajectory_path = cfg.output_dir / "trajectory.csv";
  summary.diagnostics_path = cfg.output_dir / "diagnostics.tsv";

  std::vector<TimedPose> estimates;
  std::ostringstream diag_log;
  diag_log << "step\tx\ty\tyaw\tess\tmax_matched\tflags\n";
  auto flush = [&] {
    write_trajectory_csv(summary.trajectory_path, estimates);
    auto d = open_text(summary.diagnostics_path);
    d << diag_log.str();
  };

  Localizer filter(map, cfg.mcl, cfg.icp);
  if (cfg.init_mode == InitMode::kUniform) {
    filter.initialize(init_particles_uniform(map, cfg.mcl.n_particles,
                                             derive_seed(cfg.mcl.rng_seed, 0, 4)));
  } else {
    filter.initialize(cfg.initial_pose, cfg.initial_spread);
  }

  try {
    std::optional<PointCloud2> prev;
    for (const ManifestEntry& entry : manifest) {
      PointCloud2 scan = load_scan(entry.path, cfg);
      const StepDiagnostics d = prev ? filter.step(*prev, scan) : filter.observe(scan);
      estimates.push_back({entry.timestamp, d.estimate});
      diag_log << format_diagnostics(d) << '\n';
      prev = std::move(scan);
    }
  } catch (const LostLocalizationError& e) {
    diag_log << "# lost at step " << e.step() << ": " << e.what() << '\n';
    flush();
    out << "lost localization at step " << e.step() << " after " << estimates.size()
        << " estimates\n";
    throw;
  }
  flush();
  summary.steps = estimates.size();
  out << "localized " << summary.steps << " scans -> " << summary.trajectory_path.string() << '\n';
  return summary;
}

ErrorReport cmd_eval(const EvalCommandOptions& opts, std::ostream& out) {
  const Trajectory est = read_trajectory_csv(opts.estimate);
  const Trajectory gt = read_trajectory_csv(opts.truth);
  std::vector<double> excluded;
  if (opts.diagnostics) excluded = excluded_times_from_diagnostics(*opts.diagnostics, est);

  const ErrorReport report = evaluate(est, gt, opts.eval, excluded);
  write_report_text(out, report);

  if (!opts.output_dir.empty()) {
    ensure_dir(opts.output_dir);
    {
      auto f = open_text(opts.output_dir / "report.txt");
      write_report_text(f, report);
    }
    {
      auto f = open_text(opts.output_dir / "report.csv");
      write_report_csv(f, report);
    }
    const Association a = associate(est, gt, opts.eval.max_dt);
    auto f = open_text(opts.output_dir / "plot.svg");
    f << render_evaluation_svg(est.samples(), gt.samples(), a.pairs);
  }
  return report;
}

void cmd_simulate(const SimulateOptions& opts, std::ostream& out) {
  opts.degrade.validate();
  if (!(opts.angular_step > 0.0)) throw ConfigError("angular step must be positive");
  const PointCloud2 world_cloud = make_corridor_world(opts.world);
  const PointMap world(world_cloud);
  const auto truth = make_centreline_trajectory(opts.world, opts.trajectory);

  ensure_dir(opts.output_dir / "scans");
  write_cloud_csv(opts.output_dir / "map.csv", world_cloud);
  write_trajectory_csv(opts.output_dir / "gt.csv", truth);

  auto manifest = open_text(opts.output_dir / "manifest.txt");
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const PointCloud2 ideal =
        simulate_scan(world, truth[k].pose, opts.degrade.max_range, opts.angular_step);
    const PointCloud2 scan = degrade(ideal, opts.degrade, derive_seed(opts.seed, k, 3));
    char name[32];
    std::snprintf(name, sizeof(name), "scan_%06zu.csv", k);
    write_cloud_csv(opts.output_dir / "scans" / name, scan);
    manifest << format_number(truth[k].t) << " scans/" << name << '\n';
  }

  RunConfig cfg;
  cfg.map_path = "map.csv";
  cfg.manifest_path = "manifest.txt";
  cfg.output_dir = "localize_out";
  cfg.scan_max_range = opts.degrade.max_range;
  cfg.initial_pose = truth.empty() ? Pose2{} : truth.front().pose;
  cfg.mcl.n_particles = opts.n_particles;
  cfg.mcl.rng_seed = opts.seed;
  auto c = open_text(opts.output_dir / "localize.cfg");
  c << format_run_config(cfg);

  out << "simulated " << truth.size() << " scans, world of " << world_cloud.size()
      << " points -> " << opts.output_dir.string() << '\n';
}

void write_histogram_csv(std::ostream& out, const DistanceHistogram& h) {
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out << format_number(h.bin_edges[i]) << ',' << format_number(h.bin_edges[i + 1]) << ','
        << h.counts[i] << '\n';
  }
  out << "overflow," << h.overflow << '\n';
}

DistanceHistogram cmd_similarity(const SimilarityOptions& opts, std::ostream& out) {
  const PointCloud2 fake = read_cloud_csv(opts.fake);
  const PointCloud2 real = read_cloud_csv(opts.real);
  const DistanceHistogram h = nn_distance_histogram(fake, real, opts.bin_edges);
  if (opts.output) {
    auto f = open_text(*opts.output);
    write_histogram_csv(f, h);
  }
  for (double d : {1.0, 2.0}) {
    out << "fraction_within_" << format_number(d) << "m = ";
    try {
      out << format_number(fraction_within(h, d)) << '\n';
    } catch (const ConfigError&) {
      out << "n/a (not a bin edge)\n";
    }
  }
  return h;
}

IcpResult cmd_icp(const IcpCommandOptions& opts, std::ostream& out) {
  const PointCloud2 source = read_cloud_csv(opts.source);
  const PointCloud2 target = read_cloud_csv(opts.target);
  const IcpResult r = icp_align(source, target, opts.init, opts.params);
  out << format_number(r.transform.x()) << ' ' << format_number(r.transform.y()) << ' '
      << format_number(r.transform.yaw()) << ' ' << format_number(r.rms_residual) << ' '
      << r.iterations << ' ' << (r.converged ? 1 : 0) << '\n';
  return r;
}

namespace {

std::vector<double> parse_bin_spec(const std::string& spec) {
  double lo = 0.0, step = 0.0, hi = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> lo >> c1 >> step >> c2 >> hi) || c1 != ':' || c2 != ':' || !in.eof()) {
    throw ConfigError("bin spec must look like lo:step:hi, got '" + spec + "'");
  }
  return make_bin_edges(lo, step, hi);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"2D radar/lidar Monte Carlo localization toolkit", "radarloc"};
  app.require_subcommand(1);

  ConvertOptions convert;
  std::string convert_input, convert_output;
  double convert_resolution = 0.0;
  auto* sc_convert = app.add_subcommand("convert", "Convert a PGM range image to a CSV cloud (or back)");
  sc_convert->add_option("input", convert_input, "Input .pgm or .csv")->required();
  sc_convert->add_option("-o,--output", convert_output, "Output path")->required();
  auto* res_opt = sc_convert->add_option("--resolution", convert_resolution,
                                         "Metres per pixel (overrides the PGM header)");
  sc_convert->add_option("--threshold", convert.threshold, "Binarization threshold [0,255]")
      ->check(CLI::Range(0, 255));
  sc_convert->add_option("--width", convert.width, "Raster width for cloud->image");

  std::string localize_config;
  auto* sc_localize = app.add_subcommand("localize", "Run the particle filter over a scan manifest");
  sc_localize->add_option("config", localize_config, "Run config file")->required();

  EvalCommandOptions eval;
  std::string eval_est, eval_gt, eval_out, eval_diag;
  auto* sc_eval = app.add_subcommand("eval", "Score an estimated trajectory against ground truth");
  sc_eval->add_option("estimate", eval_est, "Estimated trajectory CSV")->required();
  sc_eval->add_option("truth", eval_gt, "Ground-truth trajectory CSV")->required();
  sc_eval->add_option("-o,--output-dir", eval_out, "Directory for report.txt/report.csv/plot.svg");
  sc_eval->add_option("--max-dt", eval.eval.max_dt, "Association window in seconds");
  sc_eval->add_option("--diagnostics", eval_diag, "Diagnostics log; degenerate steps are excluded");

  SimulateOptions sim;
  std::string sim_out;
  double sim_step_deg = 1.0;
  auto* sc_sim = app.add_subcommand("simulate", "Generate a synthetic corridor-loop dataset");
  sc_sim->add_option("-o,--output-dir", sim_out, "Dataset directory")->required();
  sc_sim->add_option("--steps", sim.trajectory.steps, "Number of poses/scans");
  sc_sim->add_option("--step-length", sim.trajectory.step_length, "Metres travelled per step");
  sc_sim->add_option("--dt", sim.trajectory.dt, "Seconds per step");
  sc_sim->add_option("--loop-length", sim.world.length, "Centreline x extent (m)");
  sc_sim->add_option("--loop-width", sim.world.width, "Centreline y extent (m)");
  sc_sim->add_option("--corridor-width", sim.world.corridor_width, "Wall-to-wall width (m)");
  sc_sim->add_option("--landmarks", sim.world.landmarks, "Number of pillar clusters");
  sc_sim->add_option("--world-seed", sim.world.seed, "Seed for pillar placement");
  sc_sim->add_option("--keep-prob", sim.degrade.keep_prob, "Point survival probability");
  sc_sim->add_option("--jitter", sim.degrade.jitter_sigma, "Per-point jitter sigma (m)");
  sc_sim->add_option("--ghost-rate", sim.degrade.ghost_rate, "Expected ghost points per scan");
  sc_sim->add_option("--max-range", sim.degrade.max_range, "Sensor range (m)");
  sc_sim->add_option("--angular-step-deg", sim_step_deg, "Bearing resolution (deg)");
  sc_sim->add_option("--particles", sim.n_particles, "Particle count written to localize.cfg");
  sc_sim->add_option("--seed", sim.seed, "Seed for scan degradation and the filter");

  SimilarityOptions similarity;
  std::string sim_fake, sim_real, sim_hist, bin_spec = "0:0.25:5";
  auto* sc_similarity = app.add_subcommand("similarity", "NN-distance histogram from fake to real cloud");
  sc_similarity->add_option("fake", sim_fake, "Fake (generated) cloud CSV")->required();
  sc_similarity->add_option("real", sim_real, "Real reference cloud CSV")->required();
  sc_similarity->add_option("--bins", bin_spec, "Bin edges as lo:step:hi");
  sc_similarity->add_option("-o,--output", sim_hist, "Histogram CSV path");

  IcpCommandOptions icp;
  std::string icp_src, icp_tgt;
  std::vector<double> icp_init;
  auto* sc_icp = app.add_subcommand("icp", "Align a source cloud onto a target cloud");
  sc_icp->add_option("source", icp_src, "Source cloud CSV")->required();
  sc_icp->add_option("target", icp_tgt, "Target cloud CSV")->required();
  sc_icp->add_option("--init", icp_init, "Initial guess: x y yaw_rad")->expected(3);
  sc_icp->add_option("--max-iterations", icp.params.max_iterations, "Iteration cap");
  sc_icp->add_option("--max-correspondence-dist", icp.params.max_correspondence_dist,
                     "Correspondence gate (m)");
  sc_icp->add_option("--min-correspondences", icp.params.min_correspondences,
                     "Minimum surviving pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sc_convert->parsed()) {
      convert.input = convert_input;
      convert.output = convert_output;
      if (res_opt->count() > 0) convert.resolution = convert_resolution;
      cmd_convert(convert, out);
    } else if (sc_localize->parsed()) {
      cmd_localize(localize_config, out);
    } else if (sc_eval->parsed()) {
      eval.estimate = eval_est;
      eval.truth = eval_gt;
      eval.output_dir = eval_out;
      if (!eval_diag.empty()) eval.diagnostics = fs::path(eval_diag);
      cmd_eval(eval, out);
    } else if (sc_sim->parsed()) {
      sim.output_dir = sim_out;
      sim.angular_step = deg_to_rad(sim_step_deg);
      cmd_simulate(sim, out);
    } else if (sc_similarity->parsed()) {
      similarity.fake = sim_fake;
      similarity.real = sim_real;
      similarity.bin_edges = parse_bin_spec(bin_spec);
      if (!sim_hist.empty()) similarity.output = fs::path(sim_hist);
      cmd_similarity(similarity, out);
    } else if (sc_icp->parsed()) {
      icp.source = icp_src;
      icp.target = icp_tgt;
      if (icp_init.size() == 3) icp.init = Pose2(icp_init[0], icp_init[1], icp_init[2]);
      cmd_icp(icp, out);
    }
  } catch (const LostLocalizationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitLost;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace radarloc::app

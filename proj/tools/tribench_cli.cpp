// Command-line front end for the triangulation benchmark suites.
//
// Exit codes: 0 success, 2 input-format error, 3 degenerate-geometry abort,
// 4 I/O error.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>

#include "tribench/alignment.hpp"

#include "tribench/experiments.hpp"

namespace {

using namespace tribench;

std::vector<double> parse_levels(const std::string& range) {
  const auto colon = range.find(':');
  std::vector<double> levels;
  try {
    if (colon == std::string::npos) {
      levels.push_back(std::stod(range));
      return levels;
    }
    const int lo = std::stoi(range.substr(0, colon));
    const int hi = std::stoi(range.substr(colon + 1));
    if (hi < lo) throw FormatError("levels range is empty: " + range);
    for (int v = lo; v <= hi; ++v) levels.push_back(static_cast<double>(v));
  } catch (const std::invalid_argument&) {
    throw FormatError("cannot parse levels '" + range + "' (expected a:b)");
  }
  return levels;
}

struct CommonArgs {
  std::string methods;
  std::uint64_t seed = 0;
  std::string out = "results.csv";
  bool serial = false;

  ExecMode mode() const { return serial ? ExecMode::Serial : ExecMode::Parallel; }
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--methods", args.methods,
                  "Comma-separated method subset (default: all applicable)");
  cmd->add_option("--seed", args.seed, "RNG seed");
  cmd->add_option("--out", args.out, "Output CSV path");
  cmd->add_flag("--serial", args.serial, "Run trials on the serial reference path");
}

void report(const std::vector<TrialRecord>& records, const std::string& out) {
  write_csv(records, out);
  std::size_t failed = 0;
  for (const TrialRecord& r : records) {
    if (!r.converged) ++failed;
  }
  std::cout << records.size() << " records -> " << out;
  if (failed > 0) std::cout << " (" << failed << " unconverged)";
  std::cout << "\n";
}

/// Per-method mean/std/median/min/max over the trial values, the summary
/// the reconstruction suites are usually read through.
void report_stats(const std::vector<TrialRecord>& records) {
  std::map<std::string, std::vector<double>> by_method;
  for (const TrialRecord& r : records) {
    if (std::isfinite(r.value)) by_method[r.method].push_back(r.value);
  }
  std::printf("%-14s %10s %10s %10s %10s %10s\n", "method", "mean", "std",
              "median", "min", "max");
  for (const auto& [method, values] : by_method) {
    const ErrorStats s = aggregate(values);
    std::printf("%-14s %10.5f %10.5f %10.5f %10.5f %10.5f\n", method.c_str(),
                s.mean, s.std_dev, s.median, s.min, s.max);
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Multi-view triangulation benchmark"};
  app.require_subcommand(1);

  // sensitivity
  auto* sens = app.add_subcommand(
      "sensitivity", "Camera-noise sensitivity of the triangulation methods");
  SensitivityConfig sens_cfg;
  std::string sens_kind = "position";
  std::string sens_levels = "1:10";
  CommonArgs sens_common;
  sens->add_option("--conf", sens_cfg.conf, "Camera configuration (1, 2 or 3)")
      ->check(CLI::Range(1, 3));
  sens->add_option("--kind", sens_kind, "Error kind: position, distance or angle");
  sens->add_option("--levels", sens_levels, "Noise levels, inclusive range a:b");
  sens->add_option("--trials", sens_cfg.trials, "Trials per level");
  sens->add_option("--pixel-noise", sens_cfg.noise.sigma_pixel,
                   "Also add pixel noise with this sigma (default 0)");
  add_common(sens, sens_common);

  // sfm-synth
  auto* synth = app.add_subcommand(
      "sfm-synth", "Full reconstruction benchmark on synthetic box scenes");
  SfmSynthConfig synth_cfg;
  CommonArgs synth_common;
  synth->add_option("--cameras", synth_cfg.n_cameras, "Number of cameras (2 or 3)")
      ->check(CLI::Range(2, 3));
  synth->add_option("--trials", synth_cfg.trials, "Number of trials");
  synth->add_option("--pixel-noise", synth_cfg.pixel_noise, "Pixel noise sigma");
  add_common(synth, synth_common);

  // sfm-real
  auto* real = app.add_subcommand(
      "sfm-real", "Full reconstruction benchmark on file-based correspondences");
  SfmRealConfig real_cfg;
  std::string real_corr, real_cams, real_gt;
  CommonArgs real_common;
  real->add_option("--correspondences", real_corr, "point_id camera_id u v file")
      ->required();
  real->add_option("--cameras-file", real_cams, "Camera roster file")->required();
  real->add_option("--gt-points", real_gt, "Ground-truth points file (optional)");
  real->add_option("--views", real_cfg.views, "Cameras per reconstruction (2 or 3)")
      ->check(CLI::Range(2, 3));
  real->add_option("--runs", real_cfg.runs, "Runs per camera combination");
  real->add_option("--points", real_cfg.points_per_run, "Points sampled per run");
  add_common(real, real_common);

  // triangulate
  auto* tri = app.add_subcommand(
      "triangulate", "Triangulate observations with known cameras, print points");
  std::string tri_cams, tri_obs, tri_method = "midpoint";
  tri->add_option("--cameras-file", tri_cams, "Camera roster file")->required();
  tri->add_option("--observations", tri_obs, "point_id camera_id u v file")
      ->required();
  tri->add_option("--method", tri_method, "Triangulation method name");

  // export-synth
  auto* exp = app.add_subcommand(
      "export-synth", "Write one sfm-synth trial in the sfm-real file formats");
  SfmSynthConfig exp_cfg;
  int exp_trial = 0;
  std::string exp_prefix = "scene";
  exp->add_option("--cameras", exp_cfg.n_cameras, "Number of cameras (2 or 3)")
      ->check(CLI::Range(2, 3));
  exp->add_option("--trial", exp_trial, "Trial index to export");
  exp->add_option("--pixel-noise", exp_cfg.pixel_noise, "Pixel noise sigma");
  exp->add_option("--seed", exp_cfg.seed, "RNG seed");
  exp->add_option("--prefix", exp_prefix, "Output path prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  if (sens->parsed()) {
    sens_cfg.kind = parse_error_kind(sens_kind);
    sens_cfg.levels = parse_levels(sens_levels);
    sens_cfg.methods = sens_common.methods;
    sens_cfg.seed = sens_common.seed;
    sens_cfg.mode = sens_common.mode();
    report(run_sensitivity(sens_cfg), sens_common.out);
  } else if (synth->parsed()) {
    synth_cfg.methods = synth_common.methods;
    synth_cfg.seed = synth_common.seed;
    synth_cfg.mode = synth_common.mode();
    const auto records = run_sfm_synth(synth_cfg);
    report(records, synth_common.out);
    report_stats(records);
  } else if (real->parsed()) {
    real_cfg.data = load_correspondence_set(real_corr, real_cams, real_gt);
    real_cfg.methods = real_common.methods;
    real_cfg.seed = real_common.seed;
    real_cfg.mode = real_common.mode();
    const auto records = run_sfm_real(real_cfg);
    report(records, real_common.out);
    report_stats(records);
  } else if (tri->parsed()) {
    CorrespondenceSet data;
    data.cameras = read_cameras_file(tri_cams);
    data.observations = read_correspondences_file(tri_obs);
    data.validate();
    const Method& method = find_method(tri_method);
    for (int pid : data.point_ids()) {
      std::vector<Camera> cams;
      std::vector<Pixel> pixels;
      for (const auto& [cam_id, px] : data.observations_of(pid)) {
        cams.push_back(data.cameras.at(cam_id));
        pixels.push_back(px);
      }
      if (!method.supports(static_cast<int>(cams.size()))) {
        throw FormatError("method '" + method.name + "' does not support " +
                          std::to_string(cams.size()) + " views");
      }
      const TriangulationResult result = method.solve(cams, pixels);
      std::printf("%d %.17g %.17g %.17g\n", pid, result.point.x(),
                  result.point.y(), result.point.z());
      if (!result.converged) {
        std::cerr << "warning: point " << pid << " did not converge\n";
      }
    }
  } else if (exp->parsed()) {
    export_sfm_synth_trial(exp_cfg, exp_trial, exp_prefix + "_cameras.txt",
                           exp_prefix + "_correspondences.txt",
                           exp_prefix + "_points.txt");
    std::cout << "wrote " << exp_prefix << "_{cameras,correspondences,points}.txt\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const tribench::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const tribench::GeometryError& e) {
    std::cerr << "degenerate geometry: " << e.what() << "\n";
    return 3;
  } catch (const tribench::Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

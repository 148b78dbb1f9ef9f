#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "tribench/io.hpp"
#include "tribench/methods.hpp"
#include "tribench/parallel.hpp"
#include "tribench/records.hpp"
#include "tribench/synthdata.hpp"
#include "tribench/viewgraph.hpp"

namespace tribench {

enum class ErrorKind { Position, Distance, Angle };

ErrorKind parse_error_kind(const std::string& name);
std::string to_string(ErrorKind kind);

/// Global poses estimated from measured correspondences alone (roster poses
/// are never consulted): per-pair eight-point essential estimation,
/// decomposition, cheirality selection, and for three or more cameras a
/// viewing-graph solve. `signature` receives a hash of the estimated poses
/// so records can prove all methods shared one pose estimate.
GlobalPoses estimate_global_poses(const CorrespondenceSet& data,
                                  std::string* signature = nullptr,
                                  std::vector<std::string>* warnings = nullptr);

struct ReconstructionResult {
  GlobalPoses poses;
  std::vector<int> point_ids;
  std::vector<TriangulationResult> points;  // parallel to point_ids
  std::vector<std::string> point_notes;     // empty when the point succeeded
  std::string pose_signature;
  std::vector<std::string> warnings;
};

/// Triangulates every point with the given method under previously
/// estimated poses (calibrations from the roster).
ReconstructionResult triangulate_with_poses(const CorrespondenceSet& data,
                                            const GlobalPoses& poses,
                                            const Method& method);

/// estimate_global_poses followed by triangulate_with_poses.
ReconstructionResult reconstruct(const CorrespondenceSet& data, const Method& method);

struct SensitivityConfig {
  int conf = 1;
  ErrorKind kind = ErrorKind::Position;
  std::vector<double> levels;
  int trials = 100;
  std::string methods;  // comma list; empty = default two-view set
  std::uint64_t seed = 0;
  NoiseSpec noise{};    // level field is ignored; per-level values come from `levels`
  ExecMode mode = ExecMode::Parallel;
  int inject_failure_trial = -1;  // test hook: force one trial to fail
};

/// Monte-Carlo camera-noise sensitivity suite: per (level, trial), sample
/// 1-3 sphere points, project with the exact cameras, perturb the poses,
/// triangulate with every method and score the configured error kind
/// against ground truth. One record per (trial, level, method).
std::vector<TrialRecord> run_sensitivity(const SensitivityConfig& config);

struct SfmSynthConfig {
  int n_cameras = 2;
  int trials = 100;
  double pixel_noise = 1.0;
  std::string methods;
  std::uint64_t seed = 0;
  ExecMode mode = ExecMode::Parallel;
};

/// Full reconstruction benchmark on fresh box scenes: project, add pixel
/// noise, estimate poses from the noisy measurements (shared across
/// methods), triangulate, similarity-align to the ground-truth points and
/// record the mean aligned 3D error. One record per (trial, method).
std::vector<TrialRecord> run_sfm_synth(const SfmSynthConfig& config);

/// The exact scene and noisy observations run_sfm_synth uses for one trial,
/// written in the correspondence/camera/point file formats. Round-tripping
/// them through run_sfm_real reproduces the trial bit-exactly.
void export_sfm_synth_trial(const SfmSynthConfig& config, int trial,
                            const std::filesystem::path& cameras_file,
                            const std::filesystem::path& correspondences_file,
                            const std::filesystem::path& gt_points_file);

struct SfmRealConfig {
  CorrespondenceSet data;
  int views = 2;  // cameras per reconstruction (2 or 3)
  int points_per_run = 20;
  int runs = 10;
  std::string methods;
  std::uint64_t seed = 0;
  ExecMode mode = ExecMode::Parallel;
  std::ostream* log = nullptr;  // skip messages; defaults to std::clog
};

/// File-based reconstruction benchmark: for every camera pair (or triple)
/// with enough shared correspondences, repeatedly sample points_per_run
/// point ids (without replacement, reported in ascending id order),
/// reconstruct and score as in run_sfm_synth. Roster poses serve only to
/// derive reference points when no ground-truth points are supplied.
std::vector<TrialRecord> run_sfm_real(const SfmRealConfig& config);

}  // namespace tribench

#include "tribench/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "tribench/alignment.hpp"
#include "tribench/relpose.hpp"

namespace tribench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream tags for the top-level RNG derivation (see rng.hpp).
constexpr std::uint64_t kSensitivityTag = 1;
constexpr std::uint64_t kSfmSynthTag = 2;
constexpr std::uint64_t kSfmRealTag = 3;

[[noreturn]] void rethrow_with_context(const GeometryError& e, const std::string& ctx) {
  const std::string msg = ctx + ": " + e.what();
  if (dynamic_cast<const DegenerateConfiguration*>(&e)) throw DegenerateConfiguration(msg);
  if (dynamic_cast<const AmbiguousCheirality*>(&e)) throw AmbiguousCheirality(msg);
  if (dynamic_cast<const DegenerateGeometry*>(&e)) throw DegenerateGeometry(msg);
  if (dynamic_cast<const DisconnectedGraph*>(&e)) throw DisconnectedGraph(msg);
  if (dynamic_cast<const CollinearDegeneracy*>(&e)) throw CollinearDegeneracy(msg);
  if (dynamic_cast<const EpipoleAtPoint*>(&e)) throw EpipoleAtPoint(msg);
  if (dynamic_cast<const CheiralityViolation*>(&e)) throw CheiralityViolation(msg);
  throw GeometryError(msg);
}

std::string hash_poses(const GlobalPoses& poses) {
  // FNV-1a over the raw double bytes, enough to prove records share a pose.
  std::uint64_t h = 1469598103934665603ull;
  const auto feed = [&h](double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  };
  for (const Rotation& r : poses.rotations) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) feed(r.matrix()(i, j));
  }
  for (const Point3& c : poses.centers) {
    feed(c.x());
    feed(c.y());
    feed(c.z());
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

ErrorKind parse_error_kind(const std::string& name) {
  if (name == "position") return ErrorKind::Position;
  if (name == "distance") return ErrorKind::Distance;
  if (name == "angle") return ErrorKind::Angle;
  throw FormatError("unknown error kind '" + name + "'");
}

std::string to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Position: return "position";
    case ErrorKind::Distance: return "distance";
    case ErrorKind::Angle: return "angle";
  }
  return "?";
}

GlobalPoses estimate_global_poses(const CorrespondenceSet& data,
                                  std::string* signature,
                                  std::vector<std::string>* warnings) {
  data.validate();
  const std::vector<int> cam_ids = data.camera_ids();
  const int n = static_cast<int>(cam_ids.size());
  if (n < 2) throw FormatError("estimate_global_poses: need at least two cameras");

  // Observations grouped as point -> (camera index -> pixel), points sorted.
  std::map<int, std::map<int, Pixel>> by_point;
  std::map<int, int> cam_index;
  for (int i = 0; i < n; ++i) cam_index[cam_ids[i]] = i;
  for (const Observation& obs : data.observations) {
    by_point[obs.point_id][cam_index.at(obs.camera_id)] = obs.pixel;
  }

  std::vector<ViewEdge> edges;
  for (int i = 0; i < n; ++i) {
    const Calibration& ki = data.cameras.at(cam_ids[i]).calib;
    for (int j = i + 1; j < n; ++j) {
      const Calibration& kj = data.cameras.at(cam_ids[j]).calib;
      std::vector<Vec3> b1, b2;
      for (const auto& [pid, views] : by_point) {
        const auto it_i = views.find(i);
        const auto it_j = views.find(j);
        if (it_i == views.end() || it_j == views.end()) continue;
        b1.push_back(bearing(ki, it_i->second));
        b2.push_back(bearing(kj, it_j->second));
      }
      if (b1.size() < 8) continue;  // connectivity is checked by the graph
      const std::string ctx =
          "pair (" + std::to_string(cam_ids[i]) + "," + std::to_string(cam_ids[j]) + ")";
      try {
        double ratio = 0.0;
        const EssentialMatrix e = estimate_essential(b1, b2, /*strict=*/false, &ratio);
        if (warnings && ratio > 1e-4) {
          char buf[64];
          std::snprintf(buf, sizeof(buf), "ns(%d;%d)=%.3g", cam_ids[i], cam_ids[j], ratio);
          warnings->push_back(buf);
        }
        const PoseSelection sel = select_pose(decompose_essential(e), b1, b2);
        if (warnings && sel.tie_broken) {
          warnings->push_back(ctx + ": cheirality tie broken toward candidate " +
                              std::to_string(sel.selected_index));
        }
        edges.push_back({i, j, sel.pose});
      } catch (const GeometryError& e) {
        rethrow_with_context(e, ctx);
      }
    }
  }

  GlobalPoses poses;
  if (n == 2) {
    if (edges.empty()) throw DisconnectedGraph("fewer than 8 shared correspondences");
    poses.rotations = {Rotation::identity(), edges[0].pose.rotation};
    poses.centers = {Point3::Zero(), edges[0].pose.direction};
  } else {
    poses = solve_viewing_graph(ViewingGraph(n, std::move(edges)));
  }
  if (signature) *signature = hash_poses(poses);
  return poses;
}

ReconstructionResult triangulate_with_poses(const CorrespondenceSet& data,
                                            const GlobalPoses& poses,
                                            const Method& method) {
  const std::vector<int> cam_ids = data.camera_ids();
  std::map<int, int> cam_index;
  std::vector<Camera> cameras;
  for (std::size_t i = 0; i < cam_ids.size(); ++i) {
    cam_index[cam_ids[i]] = static_cast<int>(i);
    Camera cam = data.cameras.at(cam_ids[i]);
    cam.pose = Pose{poses.rotations[i], poses.centers[i]};
    cameras.push_back(cam);
  }

  ReconstructionResult result;
  result.poses = poses;
  result.pose_signature = hash_poses(poses);
  for (int pid : data.point_ids()) {
    std::vector<Camera> views;
    std::vector<Pixel> pixels;
    for (const auto& [cam_id, px] : data.observations_of(pid)) {
      views.push_back(cameras[cam_index.at(cam_id)]);
      pixels.push_back(px);
    }
    result.point_ids.push_back(pid);
    std::string note;
    TriangulationResult tri;
    tri.converged = false;
    tri.point = Point3::Zero();
    try {
      if (!method.supports(static_cast<int>(views.size()))) {
        throw FormatError("method '" + method.name + "' does not support " +
                          std::to_string(views.size()) + " views");
      }
      tri = method.solve(views, pixels);
    } catch (const Error& e) {
      note = "point " + std::to_string(pid) + ": " + e.what();
    }
    result.points.push_back(tri);
    result.point_notes.push_back(std::move(note));
  }
  return result;
}

ReconstructionResult reconstruct(const CorrespondenceSet& data, const Method& method) {
  std::vector<std::string> warnings;
  const GlobalPoses poses = estimate_global_poses(data, nullptr, &warnings);
  ReconstructionResult result = triangulate_with_poses(data, poses, method);
  result.warnings = std::move(warnings);
  return result;
}

// ---------------------------------------------------------------------------
// Sensitivity suite.
// ---------------------------------------------------------------------------

std::vector<TrialRecord> run_sensitivity(const SensitivityConfig& config) {
  if (config.levels.empty()) throw FormatError("run_sensitivity: no noise levels");
  if (config.trials < 1) throw FormatError("run_sensitivity: trials must be >= 1");
  const std::array<Camera, 2> true_cameras = make_conf(config.conf);
  const auto methods = select_methods(config.methods, 2);
  const int n_points = config.kind == ErrorKind::Position ? 1
                       : config.kind == ErrorKind::Distance ? 2 : 3;
  const std::string experiment =
      "sensitivity-conf" + std::to_string(config.conf) + "-" + to_string(config.kind);
  const std::string base_notes = config.conf == 3 ? "conf3:axes+x" : "";

  const std::size_t n_levels = config.levels.size();
  const std::size_t n_tasks = n_levels * static_cast<std::size_t>(config.trials);
  std::vector<TrialRecord> records(n_tasks * methods.size());

  parallel_for(n_tasks, config.mode, [&](std::size_t task) {
    const auto level_idx = task / config.trials;
    const int trial = static_cast<int>(task % config.trials);
    const double level = config.levels[level_idx];
    const Rng trial_rng = Rng(config.seed)
                              .fork(kSensitivityTag)
                              .fork(config.conf)
                              .fork(static_cast<std::uint64_t>(config.kind))
                              .fork(level_idx)
                              .fork(trial);

    TrialRecord* out = &records[task * methods.size()];
    for (std::size_t m = 0; m < methods.size(); ++m) {
      out[m] = TrialRecord{experiment, trial,        level,
                           methods[m]->name, to_string(config.kind),
                           kNaN,       false,        base_notes};
    }

    try {
      if (trial == config.inject_failure_trial) {
        throw GeometryError("injected failure");
      }
      Rng point_rng = trial_rng.fork(0);
      const std::vector<Point3> gt = sample_sphere_points(point_rng, n_points);

      std::vector<Pixel> pixels(gt.size() * 2);
      for (std::size_t p = 0; p < gt.size(); ++p) {
        pixels[2 * p] = project(true_cameras[0], gt[p]);
        pixels[2 * p + 1] = project(true_cameras[1], gt[p]);
      }
      if (config.noise.sigma_pixel > 0.0) {
        Rng pixel_rng = trial_rng.fork(2);
        pixels = perturb_pixels(pixels, config.noise.sigma_pixel, pixel_rng);
      }

      NoiseSpec noise = config.noise;
      noise.level = level;
      std::vector<Camera> cameras(true_cameras.begin(), true_cameras.end());
      for (std::size_t c = 0; c < cameras.size(); ++c) {
        Rng cam_rng = trial_rng.fork(1).fork(c);
        cameras[c].pose = perturb_pose(cameras[c].pose, noise, cam_rng);
      }

      for (std::size_t m = 0; m < methods.size(); ++m) {
        try {
          std::vector<Point3> est(gt.size());
          bool all_converged = true;
          for (std::size_t p = 0; p < gt.size(); ++p) {
            const Camera view_cams[2] = {cameras[0], cameras[1]};
            const Pixel view_pixels[2] = {pixels[2 * p], pixels[2 * p + 1]};
            const TriangulationResult tri = methods[m]->solve(view_cams, view_pixels);
            est[p] = tri.point;
            all_converged = all_converged && tri.converged;
          }
          double error = 0.0;
          switch (config.kind) {
            case ErrorKind::Position:
              error = position_error(est[0], gt[0]);
              break;
            case ErrorKind::Distance:
              error = distance_error(est[0], est[1], gt[0], gt[1]);
              break;
            case ErrorKind::Angle:
              error = angle_error(est[0], est[1], est[2], gt[0], gt[1], gt[2]);
              break;
          }
          out[m].value = error;
          out[m].converged = all_converged && std::isfinite(error);
        } catch (const std::exception& e) {
          out[m].notes = base_notes.empty() ? e.what() : base_notes + "; " + e.what();
        }
      }
    } catch (const std::exception& e) {
      for (std::size_t m = 0; m < methods.size(); ++m) {
        out[m].notes = base_notes.empty() ? e.what() : base_notes + "; " + e.what();
      }
    }
  });
  return records;
}

// ---------------------------------------------------------------------------
// Full-reconstruction suites (synthetic and file-based).
// ---------------------------------------------------------------------------

namespace {

struct SfmTrialData {
  Scene scene;
  std::vector<Observation> observations;  // noisy measurements
};

SfmTrialData make_sfm_trial(const SfmSynthConfig& config, int trial) {
  const Rng trial_rng = Rng(config.seed)
                            .fork(kSfmSynthTag)
                            .fork(config.n_cameras)
                            .fork(trial);
  Rng scene_seed_rng = trial_rng.fork(0);
  SfmTrialData data;
  data.scene = make_box_scene(scene_seed_rng.next_u64(), config.n_cameras);

  std::vector<Pixel> pixels;
  for (std::size_t p = 0; p < data.scene.points.size(); ++p) {
    for (std::size_t c = 0; c < data.scene.cameras.size(); ++c) {
      pixels.push_back(project(data.scene.cameras[c], data.scene.points[p]));
    }
  }
  Rng pixel_rng = trial_rng.fork(1);
  pixels = perturb_pixels(pixels, config.pixel_noise, pixel_rng);

  std::size_t k = 0;
  for (std::size_t p = 0; p < data.scene.points.size(); ++p) {
    for (std::size_t c = 0; c < data.scene.cameras.size(); ++c) {
      data.observations.push_back({static_cast<int>(p), static_cast<int>(c), pixels[k++]});
    }
  }
  return data;
}

/// Pose estimation once, then one aligned-error record per method.
std::vector<TrialRecord> evaluate_reconstruction(
    const CorrespondenceSet& data, const std::vector<const Method*>& methods,
    const std::string& experiment, int trial, double level) {
  std::vector<TrialRecord> records;
  records.reserve(methods.size());
  for (const Method* m : methods) {
    records.push_back(
        TrialRecord{experiment, trial, level, m->name, "aligned-3d", kNaN, false, ""});
  }

  std::string signature;
  std::vector<std::string> warnings;
  GlobalPoses poses;
  try {
    poses = estimate_global_poses(data, &signature, &warnings);
  } catch (const std::exception& e) {
    for (TrialRecord& r : records) r.notes = std::string("pose estimation: ") + e.what();
    return records;
  }

  std::string shared_notes = "pose=" + signature;
  for (const std::string& w : warnings) shared_notes += "; " + w;

  for (std::size_t m = 0; m < methods.size(); ++m) {
    TrialRecord& rec = records[m];
    rec.notes = shared_notes;
    try {
      const ReconstructionResult recon = triangulate_with_poses(data, poses, *methods[m]);
      std::vector<Point3> est, gt;
      int failures = 0, unconverged = 0;
      for (std::size_t p = 0; p < recon.point_ids.size(); ++p) {
        // A thrown triangulation has no usable value; a mere iteration-cap
        // stop still contributes its point and only clears the trial flag.
        if (!recon.point_notes[p].empty() || !recon.points[p].point.allFinite()) {
          ++failures;
          continue;
        }
        if (!recon.points[p].converged) ++unconverged;
        est.push_back(recon.points[p].point);
        gt.push_back(data.gt_points.at(recon.point_ids[p]));
      }
      if (est.size() < 3) {
        rec.notes += "; too few triangulated points";
        continue;
      }
      const SimilarityTransform align = fit_similarity(est, gt);
      std::vector<double> errors;
      errors.reserve(est.size());
      for (std::size_t p = 0; p < est.size(); ++p) {
        errors.push_back(position_error(align.apply(est[p]), gt[p]));
      }
      rec.value = aggregate(errors).mean;
      rec.converged = failures == 0 && unconverged == 0 && std::isfinite(rec.value);
      if (failures > 0) rec.notes += "; " + std::to_string(failures) + " points failed";
      if (unconverged > 0) rec.notes += "; " + std::to_string(unconverged) + " unconverged";
    } catch (const std::exception& e) {
      rec.notes += std::string("; ") + e.what();
    }
  }
  return records;
}

CorrespondenceSet to_correspondence_set(const SfmTrialData& data) {
  CorrespondenceSet set;
  for (std::size_t c = 0; c < data.scene.cameras.size(); ++c) {
    set.cameras[static_cast<int>(c)] = data.scene.cameras[c];
  }
  set.observations = data.observations;
  for (std::size_t p = 0; p < data.scene.points.size(); ++p) {
    set.gt_points[static_cast<int>(p)] = data.scene.points[p];
  }
  return set;
}

}  // namespace

std::vector<TrialRecord> run_sfm_synth(const SfmSynthConfig& config) {
  if (config.trials < 1) throw FormatError("run_sfm_synth: trials must be >= 1");
  const auto methods = select_methods(config.methods, config.n_cameras);
  const std::string experiment = "sfm-synth-" + std::to_string(config.n_cameras) + "cam";

  const auto n_tasks = static_cast<std::size_t>(config.trials);
  std::vector<std::vector<TrialRecord>> per_trial(n_tasks);
  parallel_for(n_tasks, config.mode, [&](std::size_t task) {
    try {
      const SfmTrialData data = make_sfm_trial(config, static_cast<int>(task));
      per_trial[task] =
          evaluate_reconstruction(to_correspondence_set(data), methods, experiment,
                                  static_cast<int>(task), config.pixel_noise);
    } catch (const std::exception& e) {
      per_trial[task].clear();
      for (const Method* m : methods) {
        per_trial[task].push_back(TrialRecord{experiment, static_cast<int>(task),
                                              config.pixel_noise, m->name, "aligned-3d",
                                              kNaN, false, e.what()});
      }
    }
  });

  std::vector<TrialRecord> records;
  for (auto& chunk : per_trial) {
    records.insert(records.end(), chunk.begin(), chunk.end());
  }
  return records;
}

void export_sfm_synth_trial(const SfmSynthConfig& config, int trial,
                            const std::filesystem::path& cameras_file,
                            const std::filesystem::path& correspondences_file,
                            const std::filesystem::path& gt_points_file) {
  const SfmTrialData data = make_sfm_trial(config, trial);
  const CorrespondenceSet set = to_correspondence_set(data);
  write_cameras_file(cameras_file, set.cameras);
  write_correspondences_file(correspondences_file, set.observations);
  write_points_file(gt_points_file, set.gt_points);
}

std::vector<TrialRecord> run_sfm_real(const SfmRealConfig& config) {
  if (config.views != 2 && config.views != 3) {
    throw FormatError("run_sfm_real: views must be 2 or 3");
  }
  if (config.runs < 1 || config.points_per_run < 3) {
    throw FormatError("run_sfm_real: need runs >= 1 and points_per_run >= 3");
  }
  config.data.validate();
  const auto methods = select_methods(config.methods, config.views);
  std::ostream& log = config.log ? *config.log : std::clog;

  const std::vector<int> cam_ids = config.data.camera_ids();
  if (static_cast<int>(cam_ids.size()) < config.views) {
    throw FormatError("run_sfm_real: not enough cameras in the roster");
  }

  // Observations grouped once; combos enumerated in lexicographic order.
  std::map<int, std::map<int, Pixel>> by_point;
  for (const Observation& obs : config.data.observations) {
    by_point[obs.point_id][obs.camera_id] = obs.pixel;
  }

  std::vector<std::vector<int>> combos;
  const int nc = static_cast<int>(cam_ids.size());
  if (config.views == 2) {
    for (int i = 0; i < nc; ++i)
      for (int j = i + 1; j < nc; ++j) combos.push_back({cam_ids[i], cam_ids[j]});
  } else {
    for (int i = 0; i < nc; ++i)
      for (int j = i + 1; j < nc; ++j)
        for (int k = j + 1; k < nc; ++k)
          combos.push_back({cam_ids[i], cam_ids[j], cam_ids[k]});
  }

  struct ComboTask {
    std::size_t combo_index;
    std::vector<int> cameras;
    std::vector<int> shared_points;
    std::string experiment;
  };
  std::vector<ComboTask> tasks;
  for (std::size_t ci = 0; ci < combos.size(); ++ci) {
    const auto& combo = combos[ci];
    std::vector<int> shared;
    for (const auto& [pid, views] : by_point) {
      const bool in_all = std::all_of(combo.begin(), combo.end(), [&](int cam) {
        return views.count(cam) > 0;
      });
      if (in_all) shared.push_back(pid);
    }
    std::string name = "sfm-real-" + std::to_string(config.views) + "view";
    for (int cam : combo) name += "-c" + std::to_string(cam);
    if (static_cast<int>(shared.size()) < 8) {
      log << "skipping " << name << ": only " << shared.size()
          << " shared correspondences\n";
      continue;
    }
    if (static_cast<int>(shared.size()) < config.points_per_run) {
      throw FormatError(name + ": points_per_run exceeds the " +
                        std::to_string(shared.size()) + " shared correspondences");
    }
    tasks.push_back({ci, combo, std::move(shared), std::move(name)});
  }

  const std::size_t n_units = tasks.size() * static_cast<std::size_t>(config.runs);
  std::vector<std::vector<TrialRecord>> per_unit(n_units);
  parallel_for(n_units, config.mode, [&](std::size_t unit) {
    const ComboTask& task = tasks[unit / config.runs];
    const int run = static_cast<int>(unit % config.runs);
    try {
      Rng rng = Rng(config.seed).fork(kSfmRealTag).fork(task.combo_index).fork(run);

      // Partial Fisher-Yates draw, then ascending ids for a canonical order.
      std::vector<int> pool = task.shared_points;
      std::vector<int> chosen;
      for (int k = 0; k < config.points_per_run; ++k) {
        const auto pick = static_cast<std::size_t>(
            rng.uniform01() * static_cast<double>(pool.size() - k));
        std::swap(pool[k], pool[k + pick]);
        chosen.push_back(pool[k]);
      }
      std::sort(chosen.begin(), chosen.end());

      CorrespondenceSet subset;
      for (int cam : task.cameras) subset.cameras[cam] = config.data.cameras.at(cam);
      for (int pid : chosen) {
        for (int cam : task.cameras) {
          subset.observations.push_back({pid, cam, by_point.at(pid).at(cam)});
        }
      }
      for (int pid : chosen) {
        const auto it = config.data.gt_points.find(pid);
        if (it != config.data.gt_points.end()) {
          subset.gt_points[pid] = it->second;
        } else {
          // Reference point from the roster (ground-truth) poses.
          std::vector<Ray> rays;
          for (int cam : task.cameras) {
            rays.push_back(line_of_sight(config.data.cameras.at(cam),
                                         by_point.at(pid).at(cam)));
          }
          subset.gt_points[pid] = midpoint(rays).point;
        }
      }
      per_unit[unit] =
          evaluate_reconstruction(subset, methods, task.experiment, run, 0.0);
    } catch (const std::exception& e) {
      per_unit[unit].clear();
      for (const Method* m : methods) {
        per_unit[unit].push_back(TrialRecord{task.experiment, run, 0.0, m->name,
                                             "aligned-3d", kNaN, false, e.what()});
      }
    }
  });

  std::vector<TrialRecord> records;
  for (auto& chunk : per_unit) {
    records.insert(records.end(), chunk.begin(), chunk.end());
  }
  return records;
}

}  // namespace tribench

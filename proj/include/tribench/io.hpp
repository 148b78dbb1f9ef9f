#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "tribench/geometry.hpp"

namespace tribench {

struct Observation {
  int point_id = 0;
  int camera_id = 0;
  Pixel pixel;
};

/// Measured correspondences plus the camera roster. For real data the roster
/// poses are ground truth and serve evaluation only; reconstruction uses
/// just the calibrations. `gt_points` is optional.
struct CorrespondenceSet {
  std::map<int, Camera> cameras;
  std::vector<Observation> observations;
  std::map<int, Point3> gt_points;

  /// Checks that every referenced camera exists and every point is seen by
  /// at least two cameras. Throws FormatError otherwise.
  void validate() const;

  std::vector<int> point_ids() const;
  std::vector<int> camera_ids() const;
  /// Observations of one point keyed by camera id.
  std::map<int, Pixel> observations_of(int point_id) const;
};

// One camera per line:
// id fx fy cx cy skew width height r11 r12 r13 r21 r22 r23 r31 r32 r33 cx cy cz
std::map<int, Camera> read_cameras_file(const std::filesystem::path& path);
void write_cameras_file(const std::filesystem::path& path,
                        const std::map<int, Camera>& cameras);

// One observation per line: point_id camera_id u v
std::vector<Observation> read_correspondences_file(const std::filesystem::path& path);
void write_correspondences_file(const std::filesystem::path& path,
                                std::span<const Observation> observations);

// One point per line: point_id x y z
std::map<int, Point3> read_points_file(const std::filesystem::path& path);
void write_points_file(const std::filesystem::path& path,
                       const std::map<int, Point3>& points);

CorrespondenceSet load_correspondence_set(
    const std::filesystem::path& correspondences,
    const std::filesystem::path& cameras,
    const std::filesystem::path& gt_points = {});

}  // namespace tribench

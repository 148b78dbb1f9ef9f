#include "tribench/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace tribench {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open for reading: " + path.string());
  return file;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open for writing: " + path.string());
  return file;
}

[[noreturn]] void bad_line(const std::filesystem::path& path, int line_no) {
  throw FormatError(path.string() + ":" + std::to_string(line_no) +
                    ": malformed line");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void CorrespondenceSet::validate() const {
  std::map<int, std::set<int>> views_per_point;
  for (const Observation& obs : observations) {
    if (!cameras.count(obs.camera_id)) {
      throw FormatError("observation references unknown camera " +
                        std::to_string(obs.camera_id));
    }
    views_per_point[obs.point_id].insert(obs.camera_id);
  }
  for (const auto& [pid, views] : views_per_point) {
    if (views.size() < 2) {
      throw FormatError("point " + std::to_string(pid) +
                        " is observed by fewer than two cameras");
    }
  }
}

std::vector<int> CorrespondenceSet::point_ids() const {
  std::set<int> ids;
  for (const Observation& obs : observations) ids.insert(obs.point_id);
  return {ids.begin(), ids.end()};
}

std::vector<int> CorrespondenceSet::camera_ids() const {
  std::vector<int> ids;
  ids.reserve(cameras.size());
  for (const auto& [id, cam] : cameras) ids.push_back(id);
  return ids;
}

std::map<int, Pixel> CorrespondenceSet::observations_of(int point_id) const {
  std::map<int, Pixel> out;
  for (const Observation& obs : observations) {
    if (obs.point_id == point_id) out[obs.camera_id] = obs.pixel;
  }
  return out;
}

std::map<int, Camera> read_cameras_file(const std::filesystem::path& path) {
  auto file = open_input(path);
  std::map<int, Camera> cameras;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream in(line);
    int id = 0, width = 0, height = 0;
    Calibration k;
    Mat3 r;
    Vec3 c;
    in >> id >> k.fx >> k.fy >> k.cx >> k.cy >> k.skew >> width >> height;
    for (int row = 0; row < 3; ++row)
      for (int col = 0; col < 3; ++col) in >> r(row, col);
    in >> c.x() >> c.y() >> c.z();
    if (!in) bad_line(path, line_no);
    if (k.fx <= 0.0 || k.fy <= 0.0 || width <= 0 || height <= 0) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": invalid calibration or image size");
    }
    Camera cam;
    cam.calib = k;
    cam.width = width;
    cam.height = height;
    try {
      cam.pose = Pose{Rotation::from_matrix(r), c};
    } catch (const GeometryError&) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": rotation block is not orthonormal");
    }
    if (!cameras.emplace(id, cam).second) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": duplicate camera id");
    }
  }
  if (cameras.empty()) throw FormatError(path.string() + ": no cameras");
  return cameras;
}

void write_cameras_file(const std::filesystem::path& path,
                        const std::map<int, Camera>& cameras) {
  auto file = open_output(path);
  for (const auto& [id, cam] : cameras) {
    file << id << ' ' << fmt(cam.calib.fx) << ' ' << fmt(cam.calib.fy) << ' '
         << fmt(cam.calib.cx) << ' ' << fmt(cam.calib.cy) << ' '
         << fmt(cam.calib.skew) << ' ' << cam.width << ' ' << cam.height;
    const Mat3& r = cam.pose.rotation.matrix();
    for (int row = 0; row < 3; ++row)
      for (int col = 0; col < 3; ++col) file << ' ' << fmt(r(row, col));
    const Point3& c = cam.pose.center;
    file << ' ' << fmt(c.x()) << ' ' << fmt(c.y()) << ' ' << fmt(c.z()) << '\n';
  }
  if (!file) throw IoError("write failed: " + path.string());
}

std::vector<Observation> read_correspondences_file(const std::filesystem::path& path) {
  auto file = open_input(path);
  std::vector<Observation> observations;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream in(line);
    Observation obs;
    in >> obs.point_id >> obs.camera_id >> obs.pixel.u >> obs.pixel.v;
    if (!in) bad_line(path, line_no);
    observations.push_back(obs);
  }
  return observations;
}

void write_correspondences_file(const std::filesystem::path& path,
                                std::span<const Observation> observations) {
  auto file = open_output(path);
  for (const Observation& obs : observations) {
    file << obs.point_id << ' ' << obs.camera_id << ' ' << fmt(obs.pixel.u)
         << ' ' << fmt(obs.pixel.v) << '\n';
  }
  if (!file) throw IoError("write failed: " + path.string());
}

std::map<int, Point3> read_points_file(const std::filesystem::path& path) {
  auto file = open_input(path);
  std::map<int, Point3> points;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream in(line);
    int id = 0;
    Vec3 p;
    in >> id >> p.x() >> p.y() >> p.z();
    if (!in) bad_line(path, line_no);
    if (!points.emplace(id, p).second) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": duplicate point id");
    }
  }
  return points;
}

void write_points_file(const std::filesystem::path& path,
                       const std::map<int, Point3>& points) {
  auto file = open_output(path);
  for (const auto& [id, p] : points) {
    file << id << ' ' << fmt(p.x()) << ' ' << fmt(p.y()) << ' ' << fmt(p.z()) << '\n';
  }
  if (!file) throw IoError("write failed: " + path.string());
}

CorrespondenceSet load_correspondence_set(const std::filesystem::path& correspondences,
                                          const std::filesystem::path& cameras,
                                          const std::filesystem::path& gt_points) {
  CorrespondenceSet set;
  set.cameras = read_cameras_file(cameras);
  set.observations = read_correspondences_file(correspondences);
  if (!gt_points.empty()) set.gt_points = read_points_file(gt_points);
  set.validate();
  return set;
}

}  // namespace tribench

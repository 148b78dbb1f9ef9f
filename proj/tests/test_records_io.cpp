#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "tribench/io.hpp"
#include "tribench/records.hpp"
#include "tribench/synthdata.hpp"

using namespace tribench;

namespace {
std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}
}  // namespace

TEST_CASE("csv header, ordering and bit-exact round trip") {
  std::vector<TrialRecord> records = {
      {"expB", 1, 2.0, "midpoint", "position", 0.1234567890123456789, true, ""},
      {"expA", 0, 1.0, "l2", "position", 1.0 / 3.0, true, "note, with comma"},
      {"expA", 0, 1.0, "l1", "position", std::nan(""), false, "failed"},
      {"expA", 1, 1.0, "l2", "position", 2e-17, true, ""},
  };
  const std::string text = to_csv_string(records);
  CHECK(text.rfind("experiment,trial,level,method,kind,value,converged,notes\n", 0) == 0);
  CHECK(text.find("note; with comma") != std::string::npos);

  // Sorted by (experiment, level, trial, method).
  const auto posA0l1 = text.find("expA,0,1,l1");
  const auto posA0l2 = text.find("expA,0,1,l2");
  const auto posA1 = text.find("expA,1,1,l2");
  const auto posB = text.find("expB,1,2,midpoint");
  REQUIRE(posA0l1 != std::string::npos);
  CHECK(posA0l1 < posA0l2);
  CHECK(posA0l2 < posA1);
  CHECK(posA1 < posB);

  const auto parsed = parse_csv(text);
  REQUIRE(parsed.size() == records.size());
  sort_records(records);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(parsed[i].experiment == records[i].experiment);
    CHECK(parsed[i].trial == records[i].trial);
    CHECK(parsed[i].level == records[i].level);
    CHECK(parsed[i].method == records[i].method);
    CHECK(parsed[i].kind == records[i].kind);
    if (std::isnan(records[i].value)) {
      CHECK(std::isnan(parsed[i].value));
    } else {
      CHECK(parsed[i].value == records[i].value);  // bit-exact via %.17g
    }
    CHECK(parsed[i].converged == records[i].converged);
  }
}

TEST_CASE("csv file writing uses LF endings") {
  const auto path = temp_file("tribench_records_test.csv");
  write_csv({{"e", 0, 0.0, "m", "position", 1.5, true, ""}}, path);
  std::ifstream in(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content.find('\r') == std::string::npos);
  CHECK(read_csv(path).size() == 1);
  std::filesystem::remove(path);
}

TEST_CASE("csv parser rejects malformed input") {
  CHECK_THROWS_AS(parse_csv(""), FormatError);
  CHECK_THROWS_AS(parse_csv("bad,header\n"), FormatError);
  CHECK_THROWS_AS(
      parse_csv("experiment,trial,level,method,kind,value,converged,notes\na,b\n"),
      FormatError);
  CHECK_THROWS_AS(read_csv("/nonexistent/path.csv"), IoError);
}

TEST_CASE("camera file round trip preserves every field") {
  const Scene scene = make_box_scene(3, 3);
  std::map<int, Camera> cameras;
  for (std::size_t i = 0; i < scene.cameras.size(); ++i) {
    cameras[static_cast<int>(i)] = scene.cameras[i];
  }
  const auto path = temp_file("tribench_cameras_test.txt");
  write_cameras_file(path, cameras);
  const auto loaded = read_cameras_file(path);
  REQUIRE(loaded.size() == cameras.size());
  for (const auto& [id, cam] : cameras) {
    const Camera& back = loaded.at(id);
    CHECK((back.pose.center - cam.pose.center).norm() == 0.0);
    CHECK((back.pose.rotation.matrix() - cam.pose.rotation.matrix()).norm() == 0.0);
    CHECK(back.calib.fx == cam.calib.fx);
    CHECK(back.width == cam.width);
  }
  std::filesystem::remove(path);
}

TEST_CASE("camera file validation") {
  const auto path = temp_file("tribench_cameras_bad.txt");
  {
    std::ofstream out(path);
    out << "0 300 300 320 240 0 640 480 1 0 0 0 1 0 0 0\n";  // truncated
  }
  CHECK_THROWS_AS(read_cameras_file(path), FormatError);
  {
    std::ofstream out(path);
    out << "0 300 300 320 240 0 640 480 1 0 0 0 1 0 0 0 2 0 0 0\n";  // det != 1
  }
  CHECK_THROWS_AS(read_cameras_file(path), FormatError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_cameras_file(path), IoError);
}

TEST_CASE("correspondence and point files round trip") {
  const auto cpath = temp_file("tribench_corr_test.txt");
  const auto ppath = temp_file("tribench_points_test.txt");
  const std::vector<Observation> obs = {
      {0, 0, {1.5, 2.5}}, {0, 1, {3.25, 4.125}}, {1, 0, {5.0, 6.0}}, {1, 1, {7.0, 8.0}}};
  write_correspondences_file(cpath, obs);
  const auto obs_back = read_correspondences_file(cpath);
  REQUIRE(obs_back.size() == obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    CHECK(obs_back[i].point_id == obs[i].point_id);
    CHECK(obs_back[i].camera_id == obs[i].camera_id);
    CHECK(obs_back[i].pixel.u == obs[i].pixel.u);
    CHECK(obs_back[i].pixel.v == obs[i].pixel.v);
  }

  const std::map<int, Point3> pts = {{0, {0.1, 0.2, 0.3}}, {5, {1.0 / 3.0, -2.5, 4.0}}};
  write_points_file(ppath, pts);
  const auto pts_back = read_points_file(ppath);
  REQUIRE(pts_back.size() == pts.size());
  CHECK((pts_back.at(5) - pts.at(5)).norm() == 0.0);

  std::filesystem::remove(cpath);
  std::filesystem::remove(ppath);
}

TEST_CASE("correspondence set validation") {
  CorrespondenceSet set;
  Camera cam;
  cam.calib = default_calibration();
  set.cameras[0] = cam;
  set.cameras[1] = cam;
  set.observations = {{0, 0, {1, 1}}, {0, 1, {2, 2}}};
  CHECK_NOTHROW(set.validate());

  set.observations.push_back({1, 0, {3, 3}});  // point 1 seen once
  CHECK_THROWS_AS(set.validate(), FormatError);

  set.observations = {{0, 0, {1, 1}}, {0, 7, {2, 2}}};  // unknown camera
  CHECK_THROWS_AS(set.validate(), FormatError);
}

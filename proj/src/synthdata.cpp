#include "tribench/synthdata.hpp"

#include <cmath>
#include <numbers>

namespace tribench {

Calibration default_calibration() {
  return Calibration{300.0, 300.0, 320.0, 240.0, 0.0};
}

Camera make_look_at_camera(const Point3& center, const Point3& target) {
  Camera cam;
  cam.calib = default_calibration();
  cam.width = 640;
  cam.height = 480;
  cam.pose = Pose{look_at_rotation(center, target), center};
  return cam;
}

std::array<Camera, 2> make_conf(int id) {
  switch (id) {
    case 1:
      return {make_look_at_camera({-5.0, -1.0, 0.0}, Point3::Zero()),
              make_look_at_camera({-5.0, 1.0, 0.0}, Point3::Zero())};
    case 2:
      return {make_look_at_camera({-12.0, 0.0, 0.0}, Point3::Zero()),
              make_look_at_camera({-2.0, 0.0, 0.0}, Point3::Zero())};
    case 3: {
      // Optical axes along global +x: same frame as a camera on the -x axis
      // aimed at the origin.
      const Point3 c1(-10.0, 2.0, -1.0);
      const Point3 c2(-5.0, -2.0, 1.0);
      std::array<Camera, 2> cams = {make_look_at_camera(c1, c1 + Vec3::UnitX()),
                                    make_look_at_camera(c2, c2 + Vec3::UnitX())};
      return cams;
    }
    default:
      throw FormatError("make_conf: id must be 1, 2 or 3");
  }
}

Scene make_box_scene(std::uint64_t seed, int n_cameras, int n_points) {
  if (n_cameras != 2 && n_cameras != 3) {
    throw FormatError("make_box_scene: n_cameras must be 2 or 3");
  }
  Scene scene;
  scene.label = n_cameras == 2 ? "box-2cam" : "box-3cam";
  scene.cameras.push_back(make_look_at_camera({-7.0, 3.0, 0.0}, Point3::Zero()));
  scene.cameras.push_back(make_look_at_camera({-10.0, -3.0, 1.0}, Point3::Zero()));
  if (n_cameras == 3) {
    scene.cameras.push_back(make_look_at_camera({-8.0, 0.0, -2.0}, Point3::Zero()));
  }
  Rng rng(seed);
  scene.points = sample_box_points(rng, n_points, Vec3(1.5, 4.0, 3.0));
  return scene;
}

std::vector<Point3> sample_sphere_points(std::uint64_t seed, int n, double diameter) {
  Rng rng(seed);
  return sample_sphere_points(rng, n, diameter);
}

std::vector<Point3> sample_sphere_points(Rng& rng, int n, double diameter) {
  if (n < 1) throw FormatError("sample_sphere_points: n must be >= 1");
  std::vector<Point3> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) pts.push_back(rng.ball_point(diameter / 2.0));
  return pts;
}

std::vector<Point3> sample_box_points(Rng& rng, int n, const Vec3& half_extents) {
  std::vector<Point3> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) {
    pts.emplace_back(rng.uniform(-half_extents.x(), half_extents.x()),
                     rng.uniform(-half_extents.y(), half_extents.y()),
                     rng.uniform(-half_extents.z(), half_extents.z()));
  }
  return pts;
}

Pose perturb_pose(const Pose& pose, const NoiseSpec& noise, Rng& rng) {
  Pose out = pose;
  out.center += rng.normal_vec3(noise.sigma_center * noise.level);
  const Vec3 axis = rng.unit_vector();
  const double angle_rad = rng.normal(
      0.0, noise.sigma_angle_deg * noise.level * std::numbers::pi / 180.0);
  out.rotation = Rotation::axis_angle(axis, angle_rad) * pose.rotation;
  return out;
}

std::vector<Pixel> perturb_pixels(std::span<const Pixel> pixels,
                                  double sigma_pixel, Rng& rng) {
  std::vector<Pixel> out(pixels.begin(), pixels.end());
  if (sigma_pixel == 0.0) return out;
  for (Pixel& px : out) {
    px.u += rng.normal(0.0, sigma_pixel);
    px.v += rng.normal(0.0, sigma_pixel);
  }
  return out;
}

}  // namespace tribench

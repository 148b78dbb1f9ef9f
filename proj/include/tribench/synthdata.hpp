#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "tribench/geometry.hpp"
#include "tribench/rng.hpp"

namespace tribench {

/// Standard deviations of the camera-parameter noise processes at level 1;
/// `level` multiplies all of them.
struct NoiseSpec {
  double sigma_center = 0.01;     // scene units
  double sigma_angle_deg = 0.1;   // degrees
  double sigma_pixel = 0.0;       // pixels
  double level = 1.0;
};

struct Scene {
  std::vector<Camera> cameras;
  std::vector<Point3> points;
  std::string label;
};

/// fx = fy = 300, principal point (320, 240), zero skew; images 640x480.
Calibration default_calibration();

Camera make_look_at_camera(const Point3& center, const Point3& target);

/// The three benchmark two-camera layouts:
///   1: centers (-5,-1,0), (-5,+1,0), both aimed at the origin;
///   2: centers (-12,0,0), (-2,0,0), both aimed at the origin;
///   3: centers (-10,2,-1), (-5,-2,1), optical axes along +x.
std::array<Camera, 2> make_conf(int id);

/// Box scene: cameras at (-7,3,0), (-10,-3,1) (+ (-8,0,-2) for three
/// cameras), all aimed at the origin; points uniform in the 3x8x6 box
/// centered at the origin.
Scene make_box_scene(std::uint64_t seed, int n_cameras, int n_points = 20);

/// Uniform points in the ball centered at the origin (diameter, not radius).
std::vector<Point3> sample_sphere_points(std::uint64_t seed, int n,
                                         double diameter = 0.5);
std::vector<Point3> sample_sphere_points(Rng& rng, int n, double diameter = 0.5);

std::vector<Point3> sample_box_points(Rng& rng, int n, const Vec3& half_extents);

/// Center jitter: iid Gaussian per axis with sigma_center * level.
/// Orientation jitter: left-multiplied rotation about a uniformly random
/// axis by a Gaussian angle with sigma_angle_deg * level degrees.
Pose perturb_pose(const Pose& pose, const NoiseSpec& noise, Rng& rng);

/// iid Gaussian offset per pixel coordinate; no clipping to image bounds.
std::vector<Pixel> perturb_pixels(std::span<const Pixel> pixels,
                                  double sigma_pixel, Rng& rng);

}  // namespace tribench

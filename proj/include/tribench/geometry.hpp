#pragma once

#include <Eigen/Dense>

#include "tribench/errors.hpp"

namespace tribench {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat34 = Eigen::Matrix<double, 3, 4>;

/// 3D point in scene units.
using Point3 = Vec3;

/// Inhomogeneous image coordinates in pixels.
struct Pixel {
  double u = 0.0;
  double v = 0.0;

  Vec3 homogeneous() const { return {u, v, 1.0}; }
  double distance_to(const Pixel& other) const {
    const double du = u - other.u, dv = v - other.v;
    return std::sqrt(du * du + dv * dv);
  }
};

/// Proper rotation matrix. Construction through from_matrix() checks
/// orthonormality (|R^T R - I| and |det - 1| below 1e-9); composition and
/// projection keep the invariant without rechecking.
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}

  static Rotation identity() { return Rotation(); }

  /// Validates and wraps an orthonormal matrix with determinant +1.
  static Rotation from_matrix(const Mat3& m);

  /// Projects an arbitrary matrix onto the nearest proper rotation (SVD).
  static Rotation project(const Mat3& m);

  static Rotation axis_angle(const Vec3& axis, double angle_rad);

  const Mat3& matrix() const { return m_; }
  Rotation inverse() const { return Rotation(Mat3(m_.transpose())); }

  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  Rotation operator*(const Rotation& o) const { return Rotation(Mat3(m_ * o.m_)); }

  /// Geodesic distance in radians.
  double angle_to(const Rotation& o) const;

 private:
  explicit Rotation(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

/// Camera orientation (world-to-camera map) and position of the center.
struct Pose {
  Rotation rotation;
  Point3 center = Point3::Zero();
};

/// Pinhole intrinsics. fx, fy must be positive.
struct Calibration {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  double skew = 0.0;

  Mat3 matrix() const;
  /// K^-1 [u; v; 1], z component is exactly 1.
  Vec3 unproject(const Pixel& px) const;
};

struct Camera {
  Calibration calib;
  Pose pose;
  int width = 640;
  int height = 480;
};

/// Half-line with a unit direction.
struct Ray {
  Point3 origin = Point3::Zero();
  Vec3 direction = Vec3::UnitZ();

  /// Normalizes the direction; throws DegenerateGeometry on a zero vector.
  static Ray through(const Point3& origin, const Vec3& direction);

  Point3 at(double t) const { return origin + t * direction; }
  /// Point-to-line distance.
  double distance_to(const Point3& p) const {
    const Vec3 d = p - origin;
    return (d - direction.dot(d) * direction).norm();
  }
};

/// Dehomogenized pixel coordinates of K [R | -Rc] [p; 1].
/// Throws CheiralityViolation when p has non-positive depth in the camera.
Pixel project(const Camera& camera, const Point3& point);

/// Depth of a point along the camera's optical axis (signed).
double camera_depth(const Camera& camera, const Point3& point);

/// Ray from the camera center through the back-projected pixel, with
/// positive depth in the camera frame.
Ray line_of_sight(const Camera& camera, const Pixel& pixel);

/// Unit camera-frame direction K^-1 [u; v; 1] / |.|; z component positive.
Vec3 bearing(const Calibration& calib, const Pixel& pixel);

/// 3x4 matrix K [R | -Rc].
Mat34 camera_matrix(const Camera& camera);

/// Rotation that points the optical axis from `center` toward `target`.
/// Roll convention: image "up" follows global +z projected onto the image
/// plane; falls back to +y when the axis is within 1e-6 of being vertical.
Rotation look_at_rotation(const Point3& center, const Point3& target);

}  // namespace tribench

#include "tribench/geometry.hpp"

#include <cmath>

namespace tribench {

namespace {
constexpr double kRotationTol = 1e-9;
}

Rotation Rotation::from_matrix(const Mat3& m) {
  const double ortho = (m.transpose() * m - Mat3::Identity()).norm();
  const double det = m.determinant();
  if (ortho > kRotationTol || std::abs(det - 1.0) > kRotationTol) {
    throw DegenerateGeometry("matrix is not a proper rotation");
  }
  return Rotation(m);
}

Rotation Rotation::project(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    // Flip the least-significant singular direction to stay in SO(3).
    Mat3 s = Mat3::Identity();
    s(2, 2) = -1.0;
    r = svd.matrixU() * s * svd.matrixV().transpose();
  }
  return Rotation(r);
}

Rotation Rotation::axis_angle(const Vec3& axis, double angle_rad) {
  const double n = axis.norm();
  if (n < 1e-15) throw DegenerateGeometry("axis_angle: zero axis");
  return Rotation(Eigen::AngleAxisd(angle_rad, axis / n).toRotationMatrix());
}

double Rotation::angle_to(const Rotation& o) const {
  const double c = ((m_.transpose() * o.m_).trace() - 1.0) / 2.0;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

Mat3 Calibration::matrix() const {
  Mat3 k;
  k << fx, skew, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
  return k;
}

Vec3 Calibration::unproject(const Pixel& px) const {
  const double y = (px.v - cy) / fy;
  const double x = (px.u - cx - skew * y) / fx;
  return {x, y, 1.0};
}

Ray Ray::through(const Point3& origin, const Vec3& direction) {
  const double n = direction.norm();
  if (n < 1e-15) throw DegenerateGeometry("ray with zero direction");
  return Ray{origin, direction / n};
}

Pixel project(const Camera& camera, const Point3& point) {
  const Vec3 q = camera.pose.rotation * (point - camera.pose.center);
  if (q.z() <= 0.0) {
    throw CheiralityViolation("point has non-positive depth in camera");
  }
  const Vec3 h = camera.calib.matrix() * q;
  return {h.x() / h.z(), h.y() / h.z()};
}

double camera_depth(const Camera& camera, const Point3& point) {
  return (camera.pose.rotation * (point - camera.pose.center)).z();
}

Ray line_of_sight(const Camera& camera, const Pixel& pixel) {
  // K^-1 [u; v; 1] has z = 1, so the camera-frame depth is positive already.
  const Vec3 dir_cam = camera.calib.unproject(pixel);
  const Vec3 dir_world = camera.pose.rotation.inverse() * dir_cam;
  return Ray::through(camera.pose.center, dir_world);
}

Vec3 bearing(const Calibration& calib, const Pixel& pixel) {
  return calib.unproject(pixel).normalized();
}

Mat34 camera_matrix(const Camera& camera) {
  const Mat3& r = camera.pose.rotation.matrix();
  Mat34 p;
  p.leftCols<3>() = r;
  p.col(3) = -(r * camera.pose.center);
  return camera.calib.matrix() * p;
}

Rotation look_at_rotation(const Point3& center, const Point3& target) {
  const Vec3 axis = target - center;
  if (axis.norm() < 1e-15) {
    throw DegenerateGeometry("look_at: target coincides with camera center");
  }
  const Vec3 z = axis.normalized();
  Vec3 up = Vec3::UnitZ();
  if (std::abs(z.dot(up)) > 1.0 - 1e-6) up = Vec3::UnitY();
  const Vec3 up_in_plane = (up - z.dot(up) * z).normalized();
  const Vec3 y = -up_in_plane;  // image y axis points down
  const Vec3 x = y.cross(z);
  Mat3 r;
  r.row(0) = x;
  r.row(1) = y;
  r.row(2) = z;
  return Rotation::from_matrix(r);
}

}  // namespace tribench

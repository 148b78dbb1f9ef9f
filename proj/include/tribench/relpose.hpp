#pragma once

#include <array>
#include <span>

#include "tribench/geometry.hpp"

namespace tribench {

/// Essential matrix E = [t]x R, kept on the manifold: singular values
/// (s, s, 0) and Frobenius norm sqrt(2).
class EssentialMatrix {
 public:
  /// Builds [t]x R from a relative rotation and a translation, normalized.
  static EssentialMatrix from_pose(const Rotation& rotation, const Vec3& translation);

  /// Projects an estimate onto the essential manifold: singular values are
  /// replaced by the mean of the top two.
  static EssentialMatrix project(const Mat3& m);

  const Mat3& matrix() const { return m_; }

 private:
  explicit EssentialMatrix(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

/// Scale-free relative pose of camera j seen from camera i: `rotation` maps
/// camera-i coordinates to camera-j coordinates, `direction` is the unit
/// vector from center i toward center j expressed in camera i's frame.
struct RelativePose {
  Rotation rotation;
  Vec3 direction = Vec3::UnitX();
};

/// Normalized eight-point estimate from calibrated bearing vectors
/// (camera-frame unit vectors with positive z). Bearings are dehomogenized,
/// Hartley-normalized, and the algebraic epipolar residual is minimized by
/// SVD before projection onto the essential manifold.
///
/// With `strict` set, a design-matrix null space that is not one-dimensional
/// (ratio of the two smallest singular values above 1e-4) throws
/// DegenerateConfiguration; estimation under measurement noise should pass
/// strict=false and consult `nullspace_ratio` instead.
EssentialMatrix estimate_essential(std::span<const Vec3> bearings1,
                                   std::span<const Vec3> bearings2,
                                   bool strict = true,
                                   double* nullspace_ratio = nullptr);

/// The four (rotation, direction) candidates of the standard SVD
/// factorization {Ra, Rb} x {+t, -t}.
std::array<RelativePose, 4> decompose_essential(const EssentialMatrix& e);

struct PoseSelection {
  RelativePose pose;
  std::array<int, 4> positive_depth_counts{};
  int selected_index = 0;
  bool tie_broken = false;  // equal best count among geometrically equal candidates
};

/// Picks the candidate that places the most triangulated correspondences in
/// front of both cameras (camera 1 at the identity). Ties between
/// geometrically distinct candidates throw AmbiguousCheirality; ties between
/// equivalent ones resolve to the lowest index with tie_broken set.
PoseSelection select_pose(const std::array<RelativePose, 4>& candidates,
                          std::span<const Vec3> bearings1,
                          std::span<const Vec3> bearings2);

}  // namespace tribench

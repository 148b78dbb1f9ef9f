#include "tribench/relpose.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <vector>

#include "tribench/triangulation.hpp"

namespace tribench {

namespace {

Mat3 cross_matrix(const Vec3& t) {
  Mat3 m;
  m << 0.0, -t.z(), t.y(), t.z(), 0.0, -t.x(), -t.y(), t.x(), 0.0;
  return m;
}

/// Similarity transform that centers the points and scales their mean
/// distance from the origin to sqrt(2).
Mat3 hartley_normalization(const std::vector<Vec2>& pts) {
  Vec2 centroid = Vec2::Zero();
  for (const Vec2& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());
  double mean_dist = 0.0;
  for (const Vec2& p : pts) mean_dist += (p - centroid).norm();
  mean_dist /= static_cast<double>(pts.size());
  const double s = mean_dist > 1e-15 ? std::sqrt(2.0) / mean_dist : 1.0;
  Mat3 t;
  t << s, 0.0, -s * centroid.x(), 0.0, s, -s * centroid.y(), 0.0, 0.0, 1.0;
  return t;
}

}  // namespace

EssentialMatrix EssentialMatrix::from_pose(const Rotation& rotation,
                                           const Vec3& translation) {
  if (translation.norm() < 1e-15) {
    throw DegenerateGeometry("essential matrix needs a nonzero translation");
  }
  const Mat3 e = cross_matrix(translation.normalized()) * rotation.matrix();
  // |[t]x R|_F = sqrt(2) |t| already, renormalize against rounding.
  return EssentialMatrix(e * (std::sqrt(2.0) / e.norm()));
}

EssentialMatrix EssentialMatrix::project(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 e = svd.matrixU() * Vec3(1.0, 1.0, 0.0).asDiagonal() *
                 svd.matrixV().transpose();
  return EssentialMatrix(e);
}

EssentialMatrix estimate_essential(std::span<const Vec3> bearings1,
                                   std::span<const Vec3> bearings2,
                                   bool strict, double* nullspace_ratio) {
  const std::size_t n = bearings1.size();
  if (n < 8 || bearings2.size() != n) {
    throw FormatError("estimate_essential: need n >= 8 matched bearings");
  }

  std::vector<Vec2> x1(n), x2(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(bearings1[i].z()) < 1e-12 || std::abs(bearings2[i].z()) < 1e-12) {
      throw DegenerateConfiguration("estimate_essential: bearing at 90 degrees");
    }
    x1[i] = bearings1[i].hnormalized();
    x2[i] = bearings2[i].hnormalized();
  }
  const Mat3 t1 = hartley_normalization(x1);
  const Mat3 t2 = hartley_normalization(x2);

  Eigen::MatrixXd design(n, 9);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 p = t1 * x1[i].homogeneous();
    const Vec3 q = t2 * x2[i].homogeneous();
    design.row(i) << q.x() * p.x(), q.x() * p.y(), q.x(), q.y() * p.x(),
        q.y() * p.y(), q.y(), p.x(), p.y(), 1.0;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();  // min(n, 9) values
  // A one-dimensional null space means exactly 8 significant singular
  // values. With the minimal 8 rows the ninth value is identically zero,
  // so the deficiency signal is sv[7] collapsing (row rank < 8).
  const double ratio = n == 8 ? (sv[7] < 1e-10 * sv[0] ? 1.0 : 0.0)
                              : (sv[7] > 1e-300 ? sv[8] / sv[7] : 1.0);
  if (nullspace_ratio) *nullspace_ratio = ratio;
  if (strict && ratio > 1e-4) {
    throw DegenerateConfiguration(
        "estimate_essential: design matrix null space is not one-dimensional");
  }

  const Eigen::Matrix<double, 9, 1> e_vec = svd.matrixV().col(8);
  Mat3 e_norm;
  e_norm << e_vec[0], e_vec[1], e_vec[2], e_vec[3], e_vec[4], e_vec[5],
      e_vec[6], e_vec[7], e_vec[8];
  return EssentialMatrix::project(t2.transpose() * e_norm * t1);
}

std::array<RelativePose, 4> decompose_essential(const EssentialMatrix& e) {
  Eigen::JacobiSVD<Mat3> svd(e.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Mat3 w;
  w << 0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0;

  Mat3 ra = u * w * v.transpose();
  Mat3 rb = u * w.transpose() * v.transpose();
  if (ra.determinant() < 0.0) ra = -ra;
  if (rb.determinant() < 0.0) rb = -rb;
  const Vec3 t = u.col(2);

  // E = [t]x R places camera 1 at the identity and camera 2 at [R | t];
  // camera 2's center seen from camera 1 is -R^T t.
  const auto candidate = [](const Mat3& r, const Vec3& tt) {
    return RelativePose{Rotation::from_matrix(r), (-r.transpose() * tt).normalized()};
  };
  return {candidate(ra, t), candidate(ra, -t), candidate(rb, t), candidate(rb, -t)};
}

PoseSelection select_pose(const std::array<RelativePose, 4>& candidates,
                          std::span<const Vec3> bearings1,
                          std::span<const Vec3> bearings2) {
  const std::size_t n = bearings1.size();
  if (n < 1 || bearings2.size() != n) {
    throw FormatError("select_pose: need at least one correspondence");
  }

  std::array<int, 4> counts{};
  for (int k = 0; k < 4; ++k) {
    const RelativePose& cand = candidates[k];
    const Vec3 c2 = cand.direction;  // unit baseline gauge
    const Rotation r2_inv = cand.rotation.inverse();
    for (std::size_t i = 0; i < n; ++i) {
      try {
        const Ray rays[2] = {Ray::through(Vec3::Zero(), bearings1[i]),
                             Ray::through(c2, r2_inv * bearings2[i])};
        const Point3 p = midpoint(rays).point;
        const double depth1 = rays[0].direction.dot(p - rays[0].origin);
        const double depth2 = rays[1].direction.dot(p - rays[1].origin);
        if (depth1 > 0.0 && depth2 > 0.0) ++counts[k];
      } catch (const DegenerateGeometry&) {
        // parallel rays under this candidate; counts for neither side
      }
    }
  }

  int best = 0;
  for (int k = 1; k < 4; ++k) {
    if (counts[k] > counts[best]) best = k;
  }
  bool tie_broken = false;
  for (int k = 0; k < 4; ++k) {
    if (k == best || counts[k] != counts[best]) continue;
    const double rot_gap = candidates[k].rotation.angle_to(candidates[best].rotation);
    const double dir_gap = (candidates[k].direction - candidates[best].direction).norm();
    if (rot_gap > 1e-6 || dir_gap > 1e-6) {
      throw AmbiguousCheirality("select_pose: cheirality counts tie between distinct poses");
    }
    tie_broken = true;
  }
  return {candidates[best], counts, best, tie_broken};
}

}  // namespace tribench

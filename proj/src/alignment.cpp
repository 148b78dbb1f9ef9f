#include "tribench/alignment.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <vector>

namespace tribench {

SimilarityTransform fit_similarity(std::span<const Point3> est,
                                   std::span<const Point3> gt) {
  const std::size_t n = est.size();
  if (n < 3 || gt.size() != n) {
    throw FormatError("fit_similarity: need n >= 3 matched points");
  }

  Vec3 mu_est = Vec3::Zero(), mu_gt = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    mu_est += est[i];
    mu_gt += gt[i];
  }
  mu_est /= static_cast<double>(n);
  mu_gt /= static_cast<double>(n);

  Mat3 cov = Mat3::Zero();
  double var_est = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 x = est[i] - mu_est;
    const Vec3 y = gt[i] - mu_gt;
    cov += y * x.transpose();
    var_est += x.squaredNorm();
  }
  cov /= static_cast<double>(n);
  var_est /= static_cast<double>(n);

  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();
  if (var_est < 1e-24 || sv[1] <= 1e-12 * std::max(sv[0], 1e-300)) {
    throw DegenerateConfiguration("fit_similarity: collinear or coincident points");
  }

  Vec3 sign_fix(1.0, 1.0, 1.0);
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) {
    sign_fix.z() = -1.0;
  }
  const Mat3 r = svd.matrixU() * sign_fix.asDiagonal() * svd.matrixV().transpose();
  const double scale = sv.dot(sign_fix) / var_est;
  if (!(scale > 0.0)) {
    throw DegenerateConfiguration("fit_similarity: non-positive optimal scale");
  }

  SimilarityTransform out;
  out.rotation = Rotation::project(r);
  out.scale = scale;
  out.translation = mu_gt - scale * (out.rotation * mu_est);
  return out;
}

double similarity_objective(const SimilarityTransform& transform,
                            std::span<const Point3> est,
                            std::span<const Point3> gt) {
  double sum = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    sum += (transform.apply(est[i]) - gt[i]).squaredNorm();
  }
  return sum;
}

double position_error(const Point3& estimate, const Point3& truth) {
  return (estimate - truth).norm();
}

double distance_error(const Point3& est1, const Point3& est2,
                      const Point3& gt1, const Point3& gt2) {
  return std::abs((gt1 - gt2).norm() - (est1 - est2).norm());
}

namespace {
double vertex_angle(const Point3& apex, const Point3& p2, const Point3& p3) {
  const Vec3 v1 = p2 - apex;
  const Vec3 v2 = p3 - apex;
  const double n1 = v1.norm(), n2 = v2.norm();
  if (n1 < 1e-15 || n2 < 1e-15) {
    throw DegenerateAngle("angle_error: zero-length difference vector");
  }
  return std::acos(std::clamp(v1.dot(v2) / (n1 * n2), -1.0, 1.0));
}
}  // namespace

double angle_error(const Point3& est1, const Point3& est2, const Point3& est3,
                   const Point3& gt1, const Point3& gt2, const Point3& gt3) {
  return std::abs(vertex_angle(est1, est2, est3) - vertex_angle(gt1, gt2, gt3));
}

ErrorStats aggregate(std::span<const double> values) {
  if (values.empty()) throw EmptyInput("aggregate: empty value list");
  const auto n = static_cast<double>(values.size());

  ErrorStats stats;
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / n;

  double sq = 0.0;
  for (double v : values) sq += (v - stats.mean) * (v - stats.mean);
  stats.std_dev = std::sqrt(sq / n);

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  stats.min = sorted.front();
  stats.max = sorted.back();
  const std::size_t mid = sorted.size() / 2;
  stats.median = sorted.size() % 2 == 1
                     ? sorted[mid]
                     : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return stats;
}

}  // namespace tribench

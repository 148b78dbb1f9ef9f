#include "tribench/triangulation.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <vector>

#include "tribench/polynomial.hpp"

namespace tribench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Mat3 cross_matrix(const Vec3& t) {
  Mat3 m;
  m << 0.0, -t.z(), t.y(), t.z(), 0.0, -t.x(), -t.y(), t.x(), 0.0;
  return m;
}

/// Accumulates the (optionally weighted) mid-point normal equations and
/// solves the 3x3 system. The parallel-ray degeneracy is a property of the
/// directions alone, so the condition test runs on the unweighted matrix;
/// reweighted solves inherit the geometry already vetted by midpoint().
Point3 solve_ray_normal_equations(std::span<const Ray> rays,
                                  const std::vector<double>* weights) {
  Mat3 a = Mat3::Zero();
  Vec3 b = Vec3::Zero();
  for (std::size_t i = 0; i < rays.size(); ++i) {
    const Vec3& d = rays[i].direction;
    Mat3 term = Mat3::Identity() - d * d.transpose();
    if (weights) term *= (*weights)[i];
    a += term;
    b += term * rays[i].origin;
  }
  if (!weights) {
    Eigen::SelfAdjointEigenSolver<Mat3> eig(a);
    const Vec3 ev = eig.eigenvalues();
    if (!(ev.minCoeff() > 0.0) || ev.maxCoeff() / ev.minCoeff() > 1e12) {
      throw DegenerateGeometry("midpoint: rays are (nearly) parallel");
    }
  }
  return a.ldlt().solve(b);
}

}  // namespace

double ray_distance_cost(std::span<const Ray> rays, const Point3& p) {
  double cost = 0.0;
  for (const Ray& r : rays) {
    const double d = r.distance_to(p);
    cost += d * d;
  }
  return cost;
}

double reprojection_cost_l2(std::span<const Camera> cameras,
                            std::span<const Pixel> pixels, const Point3& p) {
  double cost = 0.0;
  for (std::size_t i = 0; i < cameras.size(); ++i) {
    const Vec3 h = camera_matrix(cameras[i]) * p.homogeneous();
    const double du = h.x() / h.z() - pixels[i].u;
    const double dv = h.y() / h.z() - pixels[i].v;
    cost += du * du + dv * dv;
  }
  return cost;
}

double reprojection_cost_l1(std::span<const Camera> cameras,
                            std::span<const Pixel> pixels, const Point3& p) {
  double cost = 0.0;
  for (std::size_t i = 0; i < cameras.size(); ++i) {
    const Vec3 h = camera_matrix(cameras[i]) * p.homogeneous();
    const double du = h.x() / h.z() - pixels[i].u;
    const double dv = h.y() / h.z() - pixels[i].v;
    cost += std::sqrt(du * du + dv * dv);
  }
  return cost;
}

TriangulationResult midpoint(std::span<const Ray> rays) {
  if (rays.size() < 2) throw FormatError("midpoint: need at least two rays");
  return {solve_ray_normal_equations(rays, nullptr), 0, true};
}

TriangulationResult midpoint_irls(std::span<const Ray> rays,
                                  IterationSettings settings) {
  if (settings.tol <= 0.0 || settings.max_iter < 1) {
    throw FormatError("midpoint_irls: tol must be > 0 and max_iter >= 1");
  }
  Point3 p = midpoint(rays).point;
  std::vector<double> weights(rays.size());
  for (int iter = 1; iter <= settings.max_iter; ++iter) {
    for (std::size_t i = 0; i < rays.size(); ++i) {
      const double z = std::max(rays[i].direction.dot(p - rays[i].origin), 1e-6);
      weights[i] = 1.0 / (z * z);
    }
    const Point3 next = solve_ray_normal_equations(rays, &weights);
    const double step = (next - p).norm();
    p = next;
    if (step < settings.tol) return {p, iter, true};
  }
  return {p, settings.max_iter, false};
}

// ---------------------------------------------------------------------------
// Two-view optimal methods on the epipolar-line parametrization.
//
// Both measurements are moved to the image origins and the epipoles onto the
// x axes. The pencil of epipolar lines in image 1 is then l1(t) = (t f1, 1, -t)
// with matching line l2(t) = F (0, t, 1)^T, and the fundamental matrix takes
// the canonical six-scalar shape used below.
// ---------------------------------------------------------------------------

namespace {

struct CanonicalEpipolar {
  double f1 = 0, f2 = 0;  // epipole z components after unit-norm scaling
  double a = 0, b = 0, c = 0, d = 0;
  Mat3 back1, back2;  // canonical frame -> homogeneous pixels
};

Mat3 fundamental_from_cameras(const Camera& cam1, const Camera& cam2) {
  const Mat3 r = (cam2.pose.rotation * cam1.pose.rotation.inverse()).matrix();
  const Vec3 t = cam2.pose.rotation * (cam1.pose.center - cam2.pose.center);
  const Mat3 e = cross_matrix(t) * r;
  const Mat3 k1_inv = cam1.calib.matrix().inverse();
  const Mat3 k2_inv = cam2.calib.matrix().inverse();
  Mat3 f = k2_inv.transpose() * e * k1_inv;
  return f / f.norm();
}

void check_epipole_clear_of(const Vec3& epipole, const Pixel& u,
                            const char* which) {
  const double w = epipole.z();
  if (std::abs(w) < 1e-12 * epipole.norm()) return;  // epipole at infinity
  const Pixel e{epipole.x() / w, epipole.y() / w};
  if (e.distance_to(u) < 1e-9) {
    throw EpipoleAtPoint(std::string("measurement coincides with the ") +
                         which + " epipole");
  }
}

CanonicalEpipolar reduce_to_canonical(const Camera& cam1, const Camera& cam2,
                                      const Pixel& u1, const Pixel& u2) {
  if ((cam1.pose.center - cam2.pose.center).norm() < 1e-12) {
    throw DegenerateGeometry("two-view triangulation: coincident camera centers");
  }
  Mat3 f = fundamental_from_cameras(cam1, cam2);

  Eigen::JacobiSVD<Mat3> svd(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
  check_epipole_clear_of(svd.matrixV().col(2), u1, "image-1");
  check_epipole_clear_of(svd.matrixU().col(2), u2, "image-2");

  Mat3 t1 = Mat3::Identity(), t2 = Mat3::Identity();
  t1(0, 2) = -u1.u;
  t1(1, 2) = -u1.v;
  t2(0, 2) = -u2.u;
  t2(1, 2) = -u2.v;
  f = t2.inverse().transpose() * f * t1.inverse();

  Eigen::JacobiSVD<Mat3> svd_t(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vec3 e1 = svd_t.matrixV().col(2);
  Vec3 e2 = svd_t.matrixU().col(2);
  const double s1 = std::hypot(e1.x(), e1.y());
  const double s2 = std::hypot(e2.x(), e2.y());
  if (s1 < 1e-12 * e1.norm() || s2 < 1e-12 * e2.norm()) {
    throw EpipoleAtPoint("measurement coincides with an epipole");
  }
  e1 /= s1;
  e2 /= s2;

  Mat3 r1 = Mat3::Identity(), r2 = Mat3::Identity();
  r1(0, 0) = e1.x(), r1(0, 1) = e1.y(), r1(1, 0) = -e1.y(), r1(1, 1) = e1.x();
  r2(0, 0) = e2.x(), r2(0, 1) = e2.y(), r2(1, 0) = -e2.y(), r2(1, 1) = e2.x();
  f = r2 * f * r1.transpose();

  CanonicalEpipolar canon;
  canon.f1 = e1.z();
  canon.f2 = e2.z();
  canon.a = f(1, 1);
  canon.b = f(1, 2);
  canon.c = f(2, 1);
  canon.d = f(2, 2);
  canon.back1 = t1.inverse() * r1.transpose();
  canon.back2 = t2.inverse() * r2.transpose();
  return canon;
}

/// Squared distance from the (translated) measurement to its epipolar line
/// pair at parameter t; the two addends of the L2 objective.
std::pair<double, double> canonical_sq_residuals(const CanonicalEpipolar& cn,
                                                 double t) {
  const double r1 = t * t / (1.0 + cn.f1 * cn.f1 * t * t);
  const double num = cn.c * t + cn.d;
  const double den = (cn.a * t + cn.b) * (cn.a * t + cn.b) +
                     cn.f2 * cn.f2 * num * num;
  if (den <= 0.0) return {r1, kInf};
  return {r1, num * num / den};
}

std::pair<double, double> canonical_sq_residuals_at_infinity(
    const CanonicalEpipolar& cn) {
  if (cn.f1 == 0.0) return {kInf, kInf};
  const double den = cn.a * cn.a + cn.f2 * cn.f2 * cn.c * cn.c;
  if (den <= 0.0) return {kInf, kInf};
  return {1.0 / (cn.f1 * cn.f1), cn.c * cn.c / den};
}

Vec3 closest_point_on_line(const Vec3& line) {
  return {-line.x() * line.z(), -line.y() * line.z(),
          line.x() * line.x() + line.y() * line.y()};
}

Pixel dehomogenize(const Vec3& h) { return {h.x() / h.z(), h.y() / h.z()}; }

TriangulationResult correct_and_intersect(const Camera& cam1,
                                          const Camera& cam2,
                                          const CanonicalEpipolar& cn,
                                          double t_best, bool at_infinity) {
  Vec3 l1, l2;
  if (at_infinity) {
    l1 = Vec3(cn.f1, 0.0, -1.0);
    l2 = Vec3(-cn.f2 * cn.c, cn.a, cn.c);
  } else {
    l1 = Vec3(t_best * cn.f1, 1.0, -t_best);
    l2 = Vec3(-cn.f2 * (cn.c * t_best + cn.d), cn.a * t_best + cn.b,
              cn.c * t_best + cn.d);
  }
  const Pixel u1 = dehomogenize(cn.back1 * closest_point_on_line(l1));
  const Pixel u2 = dehomogenize(cn.back2 * closest_point_on_line(l2));
  const Ray rays[2] = {line_of_sight(cam1, u1), line_of_sight(cam2, u2)};
  return {midpoint(rays).point, 0, true};
}

template <typename CostFn>
std::pair<double, bool> pick_best_parameter(const std::vector<double>& roots,
                                            const std::vector<double>& extra,
                                            double infinity_cost,
                                            const CostFn& cost) {
  double best_t = 0.0, best_cost = kInf;
  for (const auto& list : {roots, extra}) {
    for (double t : list) {
      const double s = cost(t);
      if (s < best_cost) {
        best_cost = s;
        best_t = t;
      }
    }
  }
  if (infinity_cost < best_cost) return {0.0, true};
  return {best_t, false};
}

}  // namespace

TriangulationResult l2_twoview(const Camera& cam1, const Camera& cam2,
                               const Pixel& u1, const Pixel& u2) {
  const CanonicalEpipolar cn = reduce_to_canonical(cam1, cam2, u1, u2);

  // g(t) = t ((at+b)^2 + f2^2 (ct+d)^2)^2
  //        - (ad - bc) (1 + f1^2 t^2)^2 (at+b)(ct+d)
  const Polynomial t({0.0, 1.0});
  const Polynomial pab({cn.b, cn.a});
  const Polynomial pcd({cn.d, cn.c});
  const Polynomial one_f1t2({1.0, 0.0, cn.f1 * cn.f1});
  const Polynomial r = pab * pab + (pcd * pcd) * (cn.f2 * cn.f2);
  const Polynomial g =
      t * (r * r) - (one_f1t2 * one_f1t2) * pab * pcd * (cn.a * cn.d - cn.b * cn.c);

  std::vector<double> roots;
  if (g.degree() >= 1) roots = real_roots(g);
  const auto cost = [&cn](double tt) {
    const auto [s1, s2] = canonical_sq_residuals(cn, tt);
    return s1 + s2;
  };
  const auto [si1, si2] = canonical_sq_residuals_at_infinity(cn);
  const auto [t_best, at_inf] =
      pick_best_parameter(roots, {0.0}, si1 + si2, cost);
  return correct_and_intersect(cam1, cam2, cn, t_best, at_inf);
}

TriangulationResult l1_twoview(const Camera& cam1, const Camera& cam2,
                               const Pixel& u1, const Pixel& u2) {
  const CanonicalEpipolar cn = reduce_to_canonical(cam1, cam2, u1, u2);

  // Stationarity of |t|/sqrt(1+f1^2 t^2) + |ct+d|/sqrt((at+b)^2+f2^2(ct+d)^2)
  // squares to g(t) = r(t)^3 - (ad-bc)^2 (at+b)^2 (1 + f1^2 t^2)^3 = 0 with
  // r(t) = (at+b)^2 + f2^2 (ct+d)^2. The kinks t = 0 and t = -d/c are
  // candidates of their own.
  const Polynomial pab({cn.b, cn.a});
  const Polynomial pcd({cn.d, cn.c});
  const Polynomial one_f1t2({1.0, 0.0, cn.f1 * cn.f1});
  const Polynomial r = pab * pab + (pcd * pcd) * (cn.f2 * cn.f2);
  const double k = cn.a * cn.d - cn.b * cn.c;
  const Polynomial g =
      r * r * r - (pab * pab) * (one_f1t2 * one_f1t2 * one_f1t2) * (k * k);

  std::vector<double> roots;
  if (g.degree() >= 1) roots = real_roots(g);
  std::vector<double> kinks = {0.0};
  if (std::abs(cn.c) > 1e-300) kinks.push_back(-cn.d / cn.c);

  const auto cost = [&cn](double tt) {
    const auto [s1, s2] = canonical_sq_residuals(cn, tt);
    return std::sqrt(s1) + std::sqrt(s2);
  };
  const auto [si1, si2] = canonical_sq_residuals_at_infinity(cn);
  const auto [t_best, at_inf] =
      pick_best_parameter(roots, kinks, std::sqrt(si1) + std::sqrt(si2), cost);
  return correct_and_intersect(cam1, cam2, cn, t_best, at_inf);
}

// ---------------------------------------------------------------------------
// N-view iterative refinement.
// ---------------------------------------------------------------------------

namespace {

struct ResidualBlock {
  Vec2 residual;
  Eigen::Matrix<double, 2, 3> jacobian;
  bool valid = false;  // false when the point sits on a principal plane
};

ResidualBlock projection_block(const Camera& cam, const Pixel& px,
                               const Point3& p) {
  ResidualBlock blk;
  const Mat3& r = cam.pose.rotation.matrix();
  const Vec3 q = r * (p - cam.pose.center);
  if (std::abs(q.z()) < 1e-12) return blk;
  const Calibration& k = cam.calib;
  const double iz = 1.0 / q.z();
  const double u = (k.fx * q.x() + k.skew * q.y()) * iz + k.cx;
  const double v = k.fy * q.y() * iz + k.cy;
  blk.residual = Vec2(u - px.u, v - px.v);
  Eigen::Matrix<double, 2, 3> du_dq;
  du_dq << k.fx * iz, k.skew * iz, -(k.fx * q.x() + k.skew * q.y()) * iz * iz,
      0.0, k.fy * iz, -k.fy * q.y() * iz * iz;
  blk.jacobian = du_dq * r;
  blk.valid = true;
  return blk;
}

/// Shared damped Gauss-Newton driver. `weight(residual_norm)` scales each
/// view's quadratic term; `objective(p)` is the true cost that accepted
/// steps must not increase.
template <typename WeightFn, typename ObjectiveFn>
TriangulationResult damped_descent(std::span<const Camera> cameras,
                                   std::span<const Pixel> pixels,
                                   const Point3& init,
                                   IterationSettings settings,
                                   const WeightFn& weight,
                                   const ObjectiveFn& objective) {
  if (cameras.size() < 2 || cameras.size() != pixels.size()) {
    throw FormatError("multiview refinement: need n >= 2 camera/pixel pairs");
  }
  Point3 p = init;
  double cost = objective(p);
  double lambda = 1e-6;
  for (int iter = 1; iter <= settings.max_iter; ++iter) {
    Mat3 h = Mat3::Zero();
    Vec3 g = Vec3::Zero();
    bool all_valid = true;
    for (std::size_t i = 0; i < cameras.size(); ++i) {
      const ResidualBlock blk = projection_block(cameras[i], pixels[i], p);
      if (!blk.valid) {
        all_valid = false;
        break;
      }
      const double w = weight(blk.residual.norm());
      h += w * blk.jacobian.transpose() * blk.jacobian;
      g += w * blk.jacobian.transpose() * blk.residual;
    }
    if (!all_valid) return {p, iter, false};

    double step_norm = 0.0;
    bool accepted = false;
    for (int attempt = 0; attempt < 24; ++attempt) {
      const Mat3 damped = h + lambda * Mat3::Identity();
      const Vec3 delta = damped.ldlt().solve(-g);
      const Point3 candidate = p + delta;
      const double candidate_cost = objective(candidate);
      if (std::isfinite(candidate_cost) && candidate_cost <= cost) {
        p = candidate;
        cost = candidate_cost;
        step_norm = delta.norm();
        lambda = std::max(lambda * 0.1, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) return {p, iter, true};  // stuck at a stationary point
    if (step_norm < settings.tol) return {p, iter, true};
  }
  return {p, settings.max_iter, false};
}

}  // namespace

TriangulationResult l2_multiview_refine(std::span<const Camera> cameras,
                                        std::span<const Pixel> pixels,
                                        const Point3& init,
                                        IterationSettings settings) {
  return damped_descent(
      cameras, pixels, init, settings, [](double) { return 1.0; },
      [&](const Point3& p) { return reprojection_cost_l2(cameras, pixels, p); });
}

TriangulationResult l1_multiview_irls(std::span<const Camera> cameras,
                                      std::span<const Pixel> pixels,
                                      const Point3& init,
                                      IterationSettings settings) {
  return damped_descent(
      cameras, pixels, init, settings,
      [](double rnorm) { return 1.0 / std::max(rnorm, 1e-9); },
      [&](const Point3& p) { return reprojection_cost_l1(cameras, pixels, p); });
}

// ---------------------------------------------------------------------------
// Closed-form angular methods. The epipolar plane through the baseline with
// unit normal n corrects each measured direction f to its projection onto
// the plane, at angular cost sin(angle) = |n^T f|.
// ---------------------------------------------------------------------------

namespace {

struct AngularFrame {
  Vec3 baseline_dir;
  Vec3 m1, m2;  // orthonormal basis of the plane orthogonal to the baseline
};

AngularFrame angular_frame(const Ray& ray1, const Ray& ray2) {
  const Vec3 baseline = ray2.origin - ray1.origin;
  if (baseline.norm() < 1e-12) {
    throw DegenerateGeometry("angular triangulation: coincident ray origins");
  }
  AngularFrame fr;
  fr.baseline_dir = baseline.normalized();
  if ((fr.baseline_dir.cross(ray1.direction)).norm() < 1e-12 ||
      (fr.baseline_dir.cross(ray2.direction)).norm() < 1e-12) {
    throw DegenerateGeometry("angular triangulation: ray parallel to baseline");
  }
  const Vec3 seed = std::abs(fr.baseline_dir.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  fr.m1 = fr.baseline_dir.cross(seed).normalized();
  fr.m2 = fr.baseline_dir.cross(fr.m1);
  return fr;
}

TriangulationResult intersect_in_plane(const Ray& ray1, const Ray& ray2,
                                       const Vec3& normal) {
  const Vec3 d1 = ray1.direction - normal.dot(ray1.direction) * normal;
  const Vec3 d2 = ray2.direction - normal.dot(ray2.direction) * normal;
  if (d1.norm() < 1e-12 || d2.norm() < 1e-12) {
    throw DegenerateGeometry("angular triangulation: ray orthogonal to epipolar plane");
  }
  const Ray corrected[2] = {Ray::through(ray1.origin, d1),
                            Ray::through(ray2.origin, d2)};
  return {midpoint(corrected).point, 0, true};
}

}  // namespace

TriangulationResult angular_l1_twoview(const Ray& ray1, const Ray& ray2) {
  const AngularFrame fr = angular_frame(ray1, ray2);
  // The L1 optimum zeroes one of the two terms: the normal is orthogonal to
  // the baseline and to one of the measured directions.
  const Vec3 n1 = fr.baseline_dir.cross(ray1.direction).normalized();
  const Vec3 n2 = fr.baseline_dir.cross(ray2.direction).normalized();
  const auto cost = [&](const Vec3& n) {
    return std::abs(n.dot(ray1.direction)) + std::abs(n.dot(ray2.direction));
  };
  const Vec3 best = cost(n1) <= cost(n2) ? n1 : n2;
  return intersect_in_plane(ray1, ray2, best);
}

TriangulationResult angular_l2_twoview(const Ray& ray1, const Ray& ray2) {
  const AngularFrame fr = angular_frame(ray1, ray2);
  const Mat3 m = ray1.direction * ray1.direction.transpose() +
                 ray2.direction * ray2.direction.transpose();
  Eigen::Matrix2d s;
  s << fr.m1.dot(m * fr.m1), fr.m1.dot(m * fr.m2), fr.m2.dot(m * fr.m1),
      fr.m2.dot(m * fr.m2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(s);
  const Eigen::Vector2d v = eig.eigenvectors().col(0);  // smallest eigenvalue
  const Vec3 normal = (v.x() * fr.m1 + v.y() * fr.m2).normalized();
  return intersect_in_plane(ray1, ray2, normal);
}

}  // namespace tribench

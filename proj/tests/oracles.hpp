// Test-only reference computations. Everything here recomputes results along
// paths independent of the library code under test: the fundamental matrix
// comes from the projection-matrix determinant formula, optimal costs from
// dense parameter sweeps, and the similarity fit from a derivative-free
// optimizer.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "tribench/geometry.hpp"
#include "tribench/rng.hpp"
#include "tribench/synthdata.hpp"

namespace oracles {

using tribench::Camera;
using tribench::Mat3;
using tribench::Mat34;
using tribench::Pixel;
using tribench::Point3;
using tribench::Ray;
using tribench::Rng;
using tribench::Vec3;

// --- random test geometry ---------------------------------------------------

inline tribench::Rotation random_rotation(Rng& rng) {
  return tribench::Rotation::axis_angle(rng.unit_vector(),
                                        rng.uniform(0.0, 3.141592653589793));
}

/// Camera at a random position 4..12 units from the origin, aimed at a
/// point jittered around the origin so the principal axis is not special.
inline Camera random_camera(Rng& rng) {
  Point3 center = rng.unit_vector() * rng.uniform(4.0, 12.0);
  Point3 target = rng.ball_point(0.5);
  while ((target - center).norm() < 1.0) center *= 2.0;
  return tribench::make_look_at_camera(center, target);
}

// --- coarse-to-fine grid minimization (mid-point oracle) ---------------------

/// Minimizes fn over a shrinking grid around the box center. Gradient-free.
inline Point3 grid_minimize(const std::function<double(const Point3&)>& fn,
                            const Point3& center, double half_width,
                            int levels = 40, int samples_per_axis = 11) {
  Point3 best = center;
  double best_val = fn(center);
  double h = half_width;
  for (int level = 0; level < levels; ++level) {
    const Point3 base = best;
    for (int ix = 0; ix < samples_per_axis; ++ix) {
      for (int iy = 0; iy < samples_per_axis; ++iy) {
        for (int iz = 0; iz < samples_per_axis; ++iz) {
          const Point3 p = base + Point3((2.0 * ix / (samples_per_axis - 1) - 1.0) * h,
                                         (2.0 * iy / (samples_per_axis - 1) - 1.0) * h,
                                         (2.0 * iz / (samples_per_axis - 1) - 1.0) * h);
          const double v = fn(p);
          if (v < best_val) {
            best_val = v;
            best = p;
          }
        }
      }
    }
    h *= 0.5;
  }
  return best;
}

// --- independent fundamental matrix and epipolar sweep -----------------------

/// Determinant formula: F(j,i) = (-1)^(i+j) det([P1 without row i; P2
/// without row j]), giving x2^T F x1 = 0. Orientation fixed by construction.
inline Mat3 fundamental_from_projections(const Mat34& p1, const Mat34& p2) {
  const auto rows_without = [](const Mat34& p, int r) {
    Eigen::Matrix<double, 2, 4> out;
    int k = 0;
    for (int i = 0; i < 3; ++i) {
      if (i != r) out.row(k++) = p.row(i);
    }
    return out;
  };
  Mat3 f;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Eigen::Matrix4d stacked;
      stacked.topRows<2>() = rows_without(p1, i);
      stacked.bottomRows<2>() = rows_without(p2, j);
      f(j, i) = (((i + j) % 2 == 0) ? 1.0 : -1.0) * stacked.determinant();
    }
  }
  return f / f.norm();
}

inline double point_line_distance(const Pixel& u, const Vec3& line) {
  const double scale = std::hypot(line.x(), line.y());
  return std::abs(line.dot(u.homogeneous())) / scale;
}

struct SweepResult {
  double min_l2 = std::numeric_limits<double>::infinity();
  double min_l1 = std::numeric_limits<double>::infinity();
};

/// Dense sweep of the epipolar-line pencil through the image-1 epipole.
/// Every angle theta yields a line pair (l1, l2 = F x for x on l1); the cost
/// of correcting onto that pair is the point-line distance (squared for L2).
inline SweepResult epipolar_sweep(const Mat34& p1, const Mat34& p2,
                                  const Point3& center2, const Pixel& u1,
                                  const Pixel& u2, int samples) {
  const Mat3 f = fundamental_from_projections(p1, p2);
  // Epipole in image 1 = image of camera 2's center (independent of F).
  const Vec3 e1_h = p1 * center2.homogeneous();
  SweepResult out;
  const bool at_infinity = std::abs(e1_h.z()) < 1e-12 * e1_h.norm();
  for (int k = 0; k < samples; ++k) {
    const double theta = 3.141592653589793 * k / samples;
    const Vec3 dir(std::cos(theta), std::sin(theta), 0.0);
    Vec3 l1, x_on_l1;
    if (at_infinity) {
      // Parallel line pencil: offset replaces the angle.
      const double offset = std::tan(theta - 1.5707963267948966) * 2000.0;
      const Vec3 d = e1_h.normalized();
      x_on_l1 = Vec3(u1.u + offset * -d.y(), u1.v + offset * d.x(), 1.0);
      l1 = x_on_l1.cross(Vec3(d.x(), d.y(), 0.0));
    } else {
      const Vec3 e1 = e1_h / e1_h.z();
      x_on_l1 = Vec3(e1.x() + dir.x(), e1.y() + dir.y(), 1.0);
      l1 = e1.cross(x_on_l1);
    }
    const Vec3 l2 = f * x_on_l1;
    if (std::hypot(l1.x(), l1.y()) < 1e-15 || std::hypot(l2.x(), l2.y()) < 1e-15) {
      continue;
    }
    const double d1 = point_line_distance(u1, l1);
    const double d2 = point_line_distance(u2, l2);
    out.min_l2 = std::min(out.min_l2, d1 * d1 + d2 * d2);
    out.min_l1 = std::min(out.min_l1, d1 + d2);
  }
  return out;
}

// --- angular sweep -----------------------------------------------------------

/// Sweeps unit normals orthogonal to the baseline; the angular correction
/// cost of plane n is |n.f| per ray (sin of the correction angle).
inline SweepResult angular_sweep(const Ray& ray1, const Ray& ray2, int samples) {
  const Vec3 t = (ray2.origin - ray1.origin).normalized();
  const Vec3 seed = std::abs(t.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 m1 = t.cross(seed).normalized();
  const Vec3 m2 = t.cross(m1);
  SweepResult out;
  for (int k = 0; k < samples; ++k) {
    const double theta = 3.141592653589793 * k / samples;
    const Vec3 n = std::cos(theta) * m1 + std::sin(theta) * m2;
    const double s1 = std::abs(n.dot(ray1.direction));
    const double s2 = std::abs(n.dot(ray2.direction));
    out.min_l1 = std::min(out.min_l1, s1 + s2);
    out.min_l2 = std::min(out.min_l2, s1 * s1 + s2 * s2);
  }
  return out;
}

// --- Nelder-Mead (similarity-fit oracle) -------------------------------------

/// Plain Nelder-Mead simplex search; enough to polish similarity-transform
/// parameters from random restarts.
inline Eigen::VectorXd nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& fn,
    const Eigen::VectorXd& x0, double initial_step, int max_iter = 4000) {
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  for (int i = 0; i < n; ++i) simplex[i + 1][i] += initial_step;
  for (int i = 0; i <= n; ++i) values[i] = fn(simplex[i]);

  const auto order = [&] {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return values[a] < values[b]; });
    std::vector<Eigen::VectorXd> s2(n + 1);
    std::vector<double> v2(n + 1);
    for (int i = 0; i <= n; ++i) {
      s2[i] = simplex[idx[i]];
      v2[i] = values[idx[i]];
    }
    simplex.swap(s2);
    values.swap(v2);
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    order();
    if (std::abs(values[n] - values[0]) < 1e-15 * (1.0 + std::abs(values[0]))) break;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += simplex[i];
    centroid /= n;

    const Eigen::VectorXd reflected = centroid + (centroid - simplex[n]);
    const double fr = fn(reflected);
    if (fr < values[0]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[n]);
      const double fe = fn(expanded);
      simplex[n] = fe < fr ? expanded : reflected;
      values[n] = std::min(fe, fr);
    } else if (fr < values[n - 1]) {
      simplex[n] = reflected;
      values[n] = fr;
    } else {
      const Eigen::VectorXd contracted = centroid + 0.5 * (simplex[n] - centroid);
      const double fc = fn(contracted);
      if (fc < values[n]) {
        simplex[n] = contracted;
        values[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
          values[i] = fn(simplex[i]);
        }
      }
    }
  }
  order();
  return simplex[0];
}

// --- polynomial expansion (root-finder oracle) --------------------------------

/// Expands prod (x - roots[k]) by convolution.
inline std::vector<double> expand_roots(const std::vector<double>& roots) {
  std::vector<double> coeffs{1.0};
  for (double r : roots) {
    std::vector<double> next(coeffs.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      next[i] += coeffs[i] * -r;
      next[i + 1] += coeffs[i];
    }
    coeffs.swap(next);
  }
  return coeffs;
}

}  // namespace oracles

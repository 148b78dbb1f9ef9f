#pragma once

#include <span>

#include "tribench/geometry.hpp"

namespace tribench {

struct TriangulationResult {
  Point3 point = Point3::Zero();
  int iterations = 0;  // 0 for closed-form methods
  bool converged = true;
};

struct IterationSettings {
  double tol = 1e-10;  // scene units, step-size stopping criterion
  int max_iter = 50;
};

/// Sum of squared point-to-ray distances (the mid-point objective).
double ray_distance_cost(std::span<const Ray> rays, const Point3& p);

/// Sum of squared pixel reprojection distances (the L2 objective).
/// Projection here is algebraic (no cheirality test): callers that care
/// about sign check depths themselves.
double reprojection_cost_l2(std::span<const Camera> cameras,
                            std::span<const Pixel> pixels, const Point3& p);

/// Sum of pixel reprojection distances (the L1 objective).
double reprojection_cost_l1(std::span<const Camera> cameras,
                            std::span<const Pixel> pixels, const Point3& p);

/// Closed-form minimizer of the sum of squared distances to the rays,
/// via the 3x3 normal equations sum(I - d d^T) p = sum(I - d d^T) o.
/// Throws DegenerateGeometry when the system matrix condition number
/// exceeds 1e12 (all rays nearly parallel). Needs at least two rays.
TriangulationResult midpoint(std::span<const Ray> rays);

/// Iteratively reweighted mid-point. Starts from midpoint(); each pass
/// re-solves the weighted normal equations with w_i = 1 / z_i^2, where
/// z_i is the depth of the current estimate along ray i (floored at 1e-6).
TriangulationResult midpoint_irls(std::span<const Ray> rays,
                                  IterationSettings settings = {});

/// Global minimizer of the two-view L2 reprojection cost: reduces the
/// problem to the stationary points of a degree-6 polynomial in the
/// epipolar-line parameter, evaluates every real root plus the t->inf
/// candidate, corrects both measurements onto the optimal epipolar lines
/// and intersects the corrected rays.
TriangulationResult l2_twoview(const Camera& cam1, const Camera& cam2,
                               const Pixel& u1, const Pixel& u2);

/// Two-view L1 counterpart: degree-8 stationarity polynomial, plus the
/// non-smooth candidates where either residual vanishes.
TriangulationResult l1_twoview(const Camera& cam1, const Camera& cam2,
                               const Pixel& u1, const Pixel& u2);

/// N-view L2 refinement: damped Gauss-Newton on the reprojection cost from
/// `init`. Accepts only cost-decreasing steps, so the final cost never
/// exceeds the initial one. converged=false when max_iter runs out.
TriangulationResult l2_multiview_refine(std::span<const Camera> cameras,
                                        std::span<const Pixel> pixels,
                                        const Point3& init,
                                        IterationSettings settings = {});

/// N-view L1 via iteratively reweighted least squares with per-view weights
/// 1 / max(residual_i, 1e-9); damping accepts only steps that do not
/// increase the L1 objective. The default iteration cap is higher than for
/// the L2 refinement because the L1 optimum regularly sits exactly on one
/// view's observation, where reweighting converges sublinearly.
TriangulationResult l1_multiview_irls(std::span<const Camera> cameras,
                                      std::span<const Pixel> pixels,
                                      const Point3& init,
                                      IterationSettings settings = {1e-10, 2000});

/// Closed-form two-view triangulation minimizing the L1 angular cost
/// |n^T f1| + |n^T f2| over unit epipolar-plane normals n orthogonal to the
/// baseline. Corrects both ray directions onto the optimal plane and
/// intersects. Throws DegenerateGeometry on coincident origins or when a
/// direction is parallel to the baseline within 1e-12.
TriangulationResult angular_l1_twoview(const Ray& ray1, const Ray& ray2);

/// Same with the L2 angular cost (n^T f1)^2 + (n^T f2)^2; the optimal
/// normal is the smallest eigenvector of the projected 2x2 covariance.
TriangulationResult angular_l2_twoview(const Ray& ray1, const Ray& ray2);

}  // namespace tribench

#pragma once

#include <span>

#include "tribench/geometry.hpp"

namespace tribench {

/// Scaled Euclidean transform p -> s R p + t.
struct SimilarityTransform {
  double scale = 1.0;
  Rotation rotation;
  Vec3 translation = Vec3::Zero();

  Point3 apply(const Point3& p) const {
    return scale * (rotation * p) + translation;
  }
};

/// Closed-form least-squares similarity aligning `est` onto `gt` (SVD of the
/// centered cross-covariance, with the reflection sign fix so the rotation
/// stays proper). Needs n >= 3 points whose cross-covariance has rank >= 2;
/// otherwise throws DegenerateConfiguration.
SimilarityTransform fit_similarity(std::span<const Point3> est,
                                   std::span<const Point3> gt);

/// Sum of squared distances between the transformed estimates and the truth.
double similarity_objective(const SimilarityTransform& transform,
                            std::span<const Point3> est,
                            std::span<const Point3> gt);

/// Euclidean 3D error.
double position_error(const Point3& estimate, const Point3& truth);

/// Absolute difference of the two pairwise distances.
double distance_error(const Point3& est1, const Point3& est2,
                      const Point3& gt1, const Point3& gt2);

/// Absolute difference (radians) between the angle spanned at the first
/// vertex by the estimated triple and by the ground-truth triple.
double angle_error(const Point3& est1, const Point3& est2, const Point3& est3,
                   const Point3& gt1, const Point3& gt2, const Point3& gt3);

struct ErrorStats {
  double mean = 0.0;
  double std_dev = 0.0;  // population (1/n) definition
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Mean, population standard deviation, median, min, max. Throws EmptyInput
/// on an empty list.
ErrorStats aggregate(std::span<const double> values);

}  // namespace tribench

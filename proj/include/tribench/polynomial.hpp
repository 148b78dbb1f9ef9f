#pragma once

#include <vector>

#include "tribench/errors.hpp"

namespace tribench {

/// Dense univariate polynomial, coefficients stored lowest degree first.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial constant(double c) { return Polynomial({c}); }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coefficients() const { return coeffs_; }

  double eval(double x) const;
  Polynomial derivative() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;

 private:
  /// Drops leading coefficients that vanish relative to the largest one.
  void trim();
  std::vector<double> coeffs_;
};

/// All real roots, via companion-matrix eigenvalues. Eigenvalues with
/// |imag| < 1e-8 * (1 + |real|) are kept, polished with 3 Newton steps,
/// and returned sorted ascending. Degree must be >= 1.
std::vector<double> real_roots(const Polynomial& poly);

}  // namespace tribench

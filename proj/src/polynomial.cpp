#include "tribench/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace tribench {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_ = {0.0};
  trim();
}

void Polynomial::trim() {
  double scale = 0.0;
  for (double c : coeffs_) scale = std::max(scale, std::abs(c));
  const double tol = scale * 1e-14;
  while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= tol) {
    coeffs_.pop_back();
  }
}

double Polynomial::eval(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() == 1) return Polynomial({0.0});
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    d[i - 1] = static_cast<double>(i) * coeffs_[i];
  }
  return Polynomial(std::move(d));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<double> r(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) r[i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) r[i] += o.coeffs_[i];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  return *this + o * -1.0;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  std::vector<double> r(coeffs_.size() + o.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
      r[i + j] += coeffs_[i] * o.coeffs_[j];
    }
  }
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> r = coeffs_;
  for (double& c : r) c *= s;
  return Polynomial(std::move(r));
}

std::vector<double> real_roots(const Polynomial& poly) {
  const auto& c = poly.coefficients();
  const int n = poly.degree();
  if (n < 1) throw FormatError("real_roots: degree must be >= 1");

  if (n == 1) {
    return {-c[0] / c[1]};
  }

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[i] / c[n];

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  const auto eigenvalues = solver.eigenvalues();

  const Polynomial deriv = poly.derivative();
  std::vector<double> roots;
  for (int i = 0; i < eigenvalues.size(); ++i) {
    const double re = eigenvalues[i].real();
    const double im = eigenvalues[i].imag();
    if (std::abs(im) >= 1e-8 * (1.0 + std::abs(re))) continue;
    double x = re;
    for (int step = 0; step < 3; ++step) {
      const double dp = deriv.eval(x);
      if (std::abs(dp) < 1e-300) break;
      x -= poly.eval(x) / dp;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace tribench

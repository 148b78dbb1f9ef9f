#include <doctest.h>

#include "oracles.hpp"
#include "tribench/polynomial.hpp"

using namespace tribench;

TEST_CASE("real_roots of x^2 - 1") {
  const auto roots = real_roots(Polynomial({-1.0, 0.0, 1.0}));
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(roots[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("real_roots of x^2 + 1 is empty") {
  CHECK(real_roots(Polynomial({1.0, 0.0, 1.0})).empty());
}

TEST_CASE("real_roots recovers the roots of an expanded product") {
  const std::vector<double> expected = {1, 2, 3, 4, 5, 6};
  const auto coeffs = oracles::expand_roots(expected);
  const auto roots = real_roots(Polynomial(coeffs));
  REQUIRE(roots.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(std::abs(roots[i] - expected[i]) < 1e-8);
  }
}

TEST_CASE("degree-8 product with clustered roots") {
  const std::vector<double> expected = {-2.0, -1.5, -0.5, 0.0, 0.25, 1.0, 1.25, 3.0};
  const auto roots = real_roots(Polynomial(oracles::expand_roots(expected)));
  REQUIRE(roots.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(std::abs(roots[i] - expected[i]) < 1e-8);
  }
}

TEST_CASE("linear polynomial") {
  const auto roots = real_roots(Polynomial({3.0, -2.0}));
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("trimming drops vanishing leading coefficients") {
  const Polynomial p({2.0, 1.0, 1e-300});
  CHECK(p.degree() == 1);
}

TEST_CASE("polynomial arithmetic and evaluation") {
  const Polynomial a({1.0, 2.0});        // 1 + 2x
  const Polynomial b({0.0, 0.0, 3.0});   // 3x^2
  const Polynomial prod = a * b;         // 3x^2 + 6x^3
  CHECK(prod.degree() == 3);
  CHECK(prod.eval(2.0) == doctest::Approx(12.0 + 48.0));
  const Polynomial d = prod.derivative();  // 6x + 18x^2
  CHECK(d.eval(1.0) == doctest::Approx(24.0));
  CHECK((a - a).degree() == 0);
  CHECK((a - a).eval(5.0) == 0.0);
}

TEST_CASE("real_roots requires degree >= 1") {
  CHECK_THROWS_AS(real_roots(Polynomial({4.0})), FormatError);
}

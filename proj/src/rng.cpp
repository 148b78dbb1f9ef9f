#include "tribench/rng.hpp"

#include <cmath>
#include <numbers>

namespace tribench {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace

std::uint64_t Rng::next_u64() {
  state_ += kGamma;
  return mix(state_);
}

Rng Rng::fork(std::uint64_t key) const {
  return Rng(mix(state_ + kGamma * (key + 1)));
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform01(); }

double Rng::normal() {
  // Box-Muller, cosine branch. u1 shifted into (0, 1] so the log is finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vec3 Rng::normal_vec3(double sigma) {
  return {normal(0.0, sigma), normal(0.0, sigma), normal(0.0, sigma)};
}

Vec3 Rng::unit_vector() {
  while (true) {
    const Vec3 v(normal(), normal(), normal());
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

Vec3 Rng::ball_point(double radius) {
  while (true) {
    const Vec3 v(uniform(-radius, radius), uniform(-radius, radius),
                 uniform(-radius, radius));
    if (v.norm() <= radius) return v;
  }
}

}  // namespace tribench

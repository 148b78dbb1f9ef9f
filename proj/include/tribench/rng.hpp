#pragma once

#include <cstdint>

#include "tribench/geometry.hpp"

namespace tribench {

/// SplitMix64 generator (Steele, Lea & Flood; the java.util.SplittableRandom
/// update/finalizer constants). Chosen because it is a tiny counter-based
/// generator whose streams can be derived from (seed, key) pairs alone, so
/// parallel trials reproduce serial results exactly.
///
/// Stream derivation rule: `fork(key)` = SplitMix64 seeded with
/// mix(state + GAMMA * (key + 1)), where mix is the SplitMix64 finalizer and
/// GAMMA = 0x9E3779B97F4A7C15. Forking does not advance the parent. The
/// harness derives one stream per trial and, inside a trial, one sub-stream
/// per purpose (point sampling, per-camera pose noise, pixel noise).
///
/// Mapping to doubles is pinned too: uniform01() = (next() >> 11) * 2^-53,
/// normal() = Box-Muller on two fresh uniforms (cosine branch, no caching).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  Rng fork(std::uint64_t key) const;

  /// Uniform in [0, 1).
  double uniform01();
  /// Uniform in [a, b).
  double uniform(double a, double b);

  /// Standard normal draw.
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  /// Independent N(0, sigma^2) per component.
  Vec3 normal_vec3(double sigma);

  /// Uniformly distributed unit vector.
  Vec3 unit_vector();

  /// Uniform in the ball of the given radius around the origin.
  Vec3 ball_point(double radius);

 private:
  std::uint64_t state_;
};

}  // namespace tribench

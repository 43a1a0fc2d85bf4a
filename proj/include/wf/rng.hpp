#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "wf/types.hpp"

namespace wf {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-derived seed: distinct (master, index) pairs give independent streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s = master ^ (0x9E3779B97F4A7C15ULL + index * 0xD1B54A32D192ED03ULL);
  std::uint64_t b = splitmix64(s);
  return a ^ (b + 0x2545F4914F6CDD1DULL + (a << 6) + (a >> 2));
}

/// Seeded random stream. All randomness in the artifact flows through this type;
/// draws are byte-reproducible because the distributions are hand-rolled on top
/// of the fully specified mt19937_64 engine.
class RngStream {
 public:
  RngStream(std::uint64_t master, std::uint64_t index = 0)
      : master_seed(master), stream_index(index), gen_(derive_seed(master, index)) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal, Box-Muller (cosine branch).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Circularly symmetric complex normal with E|z|^2 = 1
  /// (real and imaginary parts each have variance 1/2).
  Complex cnormal() {
    const double u1 = 1.0 - uniform();
    const double theta = 2.0 * std::numbers::pi * uniform();
    const double r = std::sqrt(-std::log(u1));
    return Complex(r * std::cos(theta), r * std::sin(theta));
  }

  CVector cnormal_vector(Eigen::Index n) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = cnormal();
    return v;
  }

  /// Uniformly distributed point on the complex unit sphere.
  CVector unit_vector(Eigen::Index n) {
    CVector v = cnormal_vector(n);
    double nv = v.norm();
    while (nv == 0.0) {  // probability-zero guard
      v = cnormal_vector(n);
      nv = v.norm();
    }
    return v / nv;
  }

  const std::uint64_t master_seed;
  const std::uint64_t stream_index;

 private:
  std::mt19937_64 gen_;
};

}  // namespace wf

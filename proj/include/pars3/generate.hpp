#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "pars3/coo_matrix.hpp"

namespace pars3 {

// Deterministic across platforms: mt19937_64's sequence is fixed by the
// standard and the real conversions below do not use std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform in [-1, 1).
  double uniform_signed() { return 2.0 * uniform01() - 1.0; }
  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    // Reject the top partial bucket to avoid modulo bias.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do v = engine_(); while (v >= limit);
    return v % bound;
  }

 private:
  std::mt19937_64 engine_;
};

// Random banded skew-symmetric (alpha == 0) or shifted skew-symmetric matrix.
// Each (i, j) with 0 < i - j <= half_bandwidth is present with probability
// fill, holding v != 0 uniform in [-1, 1) and the mirror (j, i) = -v.
// Diagonal entries alpha are emitted only when alpha != 0.
// Throws ArgumentError unless 1 <= half_bandwidth < n and fill in [0, 1].
CooMatrix generate_band_skew(Index n, Index half_bandwidth, double fill,
                             double alpha, std::uint64_t seed);

// Skew matrix on the k x k five-point grid graph (vertex r*k + c), random
// non-zero values, zero diagonal.
CooMatrix generate_grid_skew(Index k, std::uint64_t seed);

// x[i] uniform in [-1, 1).
DenseVector random_vector(Index n, std::uint64_t seed);

}  // namespace pars3

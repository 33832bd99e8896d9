#include "pars3/generate.hpp"

#include <algorithm>
#include <string>

#include "pars3/error.hpp"

namespace pars3 {

namespace {

double nonzero_value(Rng& rng) {
  double v;
  do v = rng.uniform_signed(); while (v == 0.0);
  return v;
}

}  // namespace

CooMatrix generate_band_skew(Index n, Index half_bandwidth, double fill,
                             double alpha, std::uint64_t seed) {
  if (half_bandwidth < 1 || half_bandwidth >= n)
    throw ArgumentError("half bandwidth must satisfy 1 <= b < n (b = " +
                        std::to_string(half_bandwidth) +
                        ", n = " + std::to_string(n) + ")");
  if (!(fill >= 0.0 && fill <= 1.0))
    throw ArgumentError("fill probability must lie in [0, 1]");

  Rng rng(seed);
  std::vector<Triplet> lower;
  lower.reserve(static_cast<std::size_t>(fill * n * half_bandwidth) + n);
  for (Index i = 1; i < n; ++i) {
    const Index first = i > half_bandwidth ? i - half_bandwidth : 0;
    for (Index j = first; j < i; ++j) {
      // Both draws happen for every candidate regardless of fill.
      const double u = rng.uniform01();
      const double v = nonzero_value(rng);
      if (u < fill) lower.push_back({i, j, v});
    }
  }

  // Assemble row-major directly: row i = lower(i, *), diag, mirrored uppers.
  std::vector<std::size_t> upper_count(n, 0);
  for (const Triplet& t : lower) ++upper_count[t.col];
  std::vector<std::size_t> lower_start(static_cast<std::size_t>(n) + 1, 0);
  for (const Triplet& t : lower) ++lower_start[t.row + 1];
  for (Index i = 0; i < n; ++i) lower_start[i + 1] += lower_start[i];

  const bool with_diag = alpha != 0.0;
  std::vector<std::size_t> offset(static_cast<std::size_t>(n) + 1, 0);
  for (Index i = 0; i < n; ++i)
    offset[i + 1] = offset[i] + (lower_start[i + 1] - lower_start[i]) +
                    (with_diag ? 1 : 0) + upper_count[i];

  std::vector<Triplet> entries(offset[n]);
  std::vector<std::size_t> cursor(n);
  for (Index i = 0; i < n; ++i) {
    std::size_t pos = offset[i];
    for (std::size_t k = lower_start[i]; k < lower_start[i + 1]; ++k)
      entries[pos++] = lower[k];
    if (with_diag) entries[pos++] = {i, i, alpha};
    cursor[i] = pos;
  }
  for (const Triplet& t : lower) entries[cursor[t.col]++] = {t.col, t.row, -t.value};

  return CooMatrix(n, std::move(entries));
}

CooMatrix generate_grid_skew(Index k, std::uint64_t seed) {
  if (k < 1) throw ArgumentError("grid side must be positive");
  Rng rng(seed);
  const Index n = k * k;
  std::vector<Triplet> entries;
  entries.reserve(4 * static_cast<std::size_t>(n));
  for (Index r = 0; r < k; ++r) {
    for (Index c = 0; c < k; ++c) {
      const Index v = r * k + c;
      // Lower neighbours: west (v - 1) and north (v - k).
      if (c > 0) {
        const double a = nonzero_value(rng);
        entries.push_back({v, v - 1, a});
        entries.push_back({v - 1, v, -a});
      }
      if (r > 0) {
        const double a = nonzero_value(rng);
        entries.push_back({v, v - k, a});
        entries.push_back({v - k, v, -a});
      }
    }
  }
  return coo_normalize(CooMatrix(n, std::move(entries)));
}

DenseVector random_vector(Index n, std::uint64_t seed) {
  Rng rng(seed);
  DenseVector x(n);
  for (double& v : x) v = rng.uniform_signed();
  return x;
}

}  // namespace pars3

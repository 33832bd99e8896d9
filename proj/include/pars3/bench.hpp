#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pars3/coo_matrix.hpp"
#include "pars3/sss_matrix.hpp"

namespace pars3 {

enum class KernelKind { serial, pars3, atomic };

const char* to_string(KernelKind k) noexcept;
// Throws ArgumentError for unknown names.
KernelKind parse_kernel(const std::string& name);

struct BenchOptions {
  std::vector<KernelKind> kernels{KernelKind::serial, KernelKind::pars3};
  std::vector<Index> workers{1, 2, 4};
  unsigned reps = 5;  // timed repetitions after one discarded warm-up
  std::uint64_t x_seed = 0;
  Index beta = 1;
};

struct BenchRun {
  KernelKind kernel = KernelKind::serial;
  Index workers = 1;
  double mean_sec = 0.0;
  double min_sec = 0.0;
  double stddev_sec = 0.0;  // sample standard deviation over reps
  double speedup = 1.0;     // serial mean / this mean
  std::size_t conflicts = 0;
  std::size_t outer_count = 0;
};

struct BenchReport {
  Index n = 0;
  std::size_t nnz = 0;  // stored nonzeros of the full matrix: 2 * lower + n
  Index bandwidth = 0;
  Index beta = 0;
  std::size_t nnz_diag = 0;
  std::size_t nnz_middle = 0;
  std::size_t nnz_outer = 0;
  double preprocess_sec = 0.0;  // split + plans, excluded from every run time
  std::vector<BenchRun> runs;
  std::vector<std::string> warnings;
};

// Times the multiply call alone for every kernel x worker count. The serial
// kernel is always measured as the speedup baseline and reported once (as
// workers = 1) when requested. Throws ArgumentError for reps < 3 or a worker
// count outside [1, n].
BenchReport run_benchmark(const SssMatrix& m, const BenchOptions& options);

// n / 1000 clamped to [8, bandwidth], and at least 1.
Index default_outer_bandwidth(Index n, Index bandwidth);

}  // namespace pars3

#include "pars3/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <thread>

#include "pars3/error.hpp"
#include "pars3/generate.hpp"
#include "pars3/kernel_parallel.hpp"
#include "pars3/kernel_serial.hpp"
#include "pars3/reorder.hpp"
#include "pars3/split.hpp"

namespace pars3 {

const char* to_string(KernelKind k) noexcept {
  switch (k) {
    case KernelKind::serial: return "serial";
    case KernelKind::pars3: return "pars3";
    case KernelKind::atomic: return "atomic";
  }
  return "unknown";
}

KernelKind parse_kernel(const std::string& name) {
  if (name == "serial") return KernelKind::serial;
  if (name == "pars3") return KernelKind::pars3;
  if (name == "atomic") return KernelKind::atomic;
  throw ArgumentError("unknown kernel '" + name + "' (serial, pars3, atomic)");
}

Index default_outer_bandwidth(Index n, Index bandwidth) {
  const Index scaled = std::max<Index>(n / 1000, 8);
  return std::max<Index>(1, std::min(scaled, bandwidth));
}

namespace {

struct Timing {
  double mean = 0.0;
  double min = 0.0;
  double stddev = 0.0;
};

Timing time_reps(unsigned reps, const std::function<void()>& multiply) {
  using clock = std::chrono::steady_clock;
  multiply();  // warm-up, discarded
  std::vector<double> samples(reps);
  for (double& s : samples) {
    const auto t0 = clock::now();
    multiply();
    const auto t1 = clock::now();
    s = std::chrono::duration<double>(t1 - t0).count();
  }
  Timing t;
  t.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / reps;
  t.min = *std::min_element(samples.begin(), samples.end());
  double ss = 0.0;
  for (double s : samples) ss += (s - t.mean) * (s - t.mean);
  t.stddev = std::sqrt(ss / (reps - 1));
  return t;
}

}  // namespace

BenchReport run_benchmark(const SssMatrix& m, const BenchOptions& options) {
  if (options.reps < 3) throw ArgumentError("benchmark needs at least 3 repetitions");
  const Index n = m.size();
  for (Index p : options.workers)
    if (p < 1 || p > n)
      throw ArgumentError("worker count " + std::to_string(p) +
                          " unavailable for " + std::to_string(n) + " rows");

  BenchReport report;
  report.n = n;
  report.nnz = 2 * m.off_diagonal_count() + n;
  report.bandwidth = compute_bandwidth(m);
  report.beta = options.beta;

  const unsigned cores = std::max(1u, std::thread::hardware_concurrency());
  for (Index p : options.workers)
    if (p > cores)
      report.warnings.push_back(std::to_string(p) + " workers oversubscribe " +
                                std::to_string(cores) + " hardware threads");

  const auto t0 = std::chrono::steady_clock::now();
  const BandSplit split = split_bands(m, options.beta);
  std::vector<Classification> plans;
  const bool wants_pars3 = std::find(options.kernels.begin(), options.kernels.end(),
                                     KernelKind::pars3) != options.kernels.end();
  std::vector<std::unique_ptr<Pars3Engine>> engines;
  for (Index p : options.workers) {
    plans.push_back(classify_conflicts(split, partition_rows(n, p)));
  }
  if (wants_pars3)
    for (const Classification& c : plans)
      engines.push_back(std::make_unique<Pars3Engine>(split, c.plan));
  report.preprocess_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report.nnz_diag = split.diag.size();
  report.nnz_middle = split.middle.size();
  report.nnz_outer = split.outer.size();

  const DenseVector x = random_vector(n, options.x_seed);
  DenseVector y(n);

  const Timing serial = time_reps(options.reps, [&] { spmv_sss_serial(m, x, y); });

  for (KernelKind kernel : options.kernels) {
    if (kernel == KernelKind::serial) {
      report.runs.push_back({kernel, 1, serial.mean, serial.min, serial.stddev,
                             1.0, 0, 0});
      continue;
    }
    for (std::size_t k = 0; k < options.workers.size(); ++k) {
      const Index p = options.workers[k];
      BenchRun run;
      run.kernel = kernel;
      run.workers = p;
      Timing t;
      if (kernel == KernelKind::pars3) {
        Pars3Engine& engine = *engines[k];
        t = time_reps(options.reps, [&] { engine.multiply(x, y); });
        run.outer_count = split.outer.size();
      } else {
        t = time_reps(options.reps, [&] { spmv_atomic(m, x, y, p); });
      }
      run.conflicts = plans[k].report.total_conflicts;
      run.mean_sec = t.mean;
      run.min_sec = t.min;
      run.stddev_sec = t.stddev;
      run.speedup = t.mean > 0.0 ? serial.mean / t.mean : 0.0;
      report.runs.push_back(run);
    }
  }
  return report;
}

}  // namespace pars3

// Acceptance runner. One line per criterion: PASS, FAIL, WARN (hardware bound,
// non gating) or SKIP (input not available). Exit status 1 on any FAIL.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "corpus.hpp"
#include "oracles.hpp"
#include "pars3/bench.hpp"
#include "pars3/generate.hpp"
#include "pars3/kernel_parallel.hpp"
#include "pars3/kernel_serial.hpp"
#include "pars3/matrix_market.hpp"
#include "pars3/reorder.hpp"
#include "pars3/split.hpp"

using namespace pars3;
namespace t = pars3::testing;
using Clock = std::chrono::steady_clock;

namespace {

enum class Status { pass, fail, warn, skip };

struct Outcome {
  Status status = Status::pass;
  std::string detail;
};

// Collects failures inside one criterion; only the first few are kept.
class Failures {
 public:
  void add(const std::string& what) {
    if (count_++ < 3) first_.push_back(what);
  }
  bool any() const { return count_ > 0; }
  std::string summary() const {
    std::string s = std::to_string(count_) + " failure(s)";
    for (const auto& f : first_) s += "; " + f;
    return s;
  }

 private:
  std::size_t count_ = 0;
  std::vector<std::string> first_;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SkewMode mode_for(double alpha) { return alpha == 0.0 ? SkewMode::strict : SkewMode::shifted; }

std::vector<Index> betas_for(const SssMatrix& m) {
  return {1, 4, std::max<Index>(1, compute_bandwidth(m))};
}

CooMatrix from_edges(Index n, const std::vector<t::Edge>& edges) {
  std::vector<Triplet> e;
  double v = 1.0;
  for (auto [a, b] : edges) {
    const Index hi = std::max(a, b), lo = std::min(a, b);
    e.push_back({hi, lo, v});
    e.push_back({lo, hi, -v});
    v += 0.5;
  }
  return coo_normalize(CooMatrix(n, std::move(e)));
}

std::vector<t::Edge> edges_of(const CooMatrix& m) {
  std::vector<t::Edge> e;
  for (const Triplet& tr : m.entries())
    if (tr.row > tr.col) e.push_back({tr.row, tr.col});
  return e;
}

Index rcm_bandwidth(const CooMatrix& m) {
  return compute_bandwidth(apply_permutation(m, rcm_order(pattern_from_coo(m))));
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  Rng rng(20240601);
  Failures f;
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Index n = 2 + static_cast<Index>(rng.below(127));
    const Index hb = 1 + static_cast<Index>(rng.below(n - 1));
    const double fill = std::array{0.1, 0.5, 1.0}[rng.below(3)];
    const double alpha = rng.below(2) ? 2.5 : 0.0;
    const CooMatrix c = generate_band_skew(n, hb, fill, alpha, 1000 + k);
    const SssMatrix m = coo_to_sss(c, mode_for(alpha));
    const DenseVector x = random_vector(n, 5000 + k);
    const double err =
        max_relative_error(spmv_sss_serial(m, x), spmv_dense_oracle(to_dense(c), x)).error;
    worst = std::max(worst, err);
    if (!(err <= 1e-13)) f.add("matrix " + std::to_string(k) + " error " + fmt("%.3g", err));
  }
  const double sec = seconds_since(t0);
  if (sec >= 30.0) f.add("runtime " + fmt("%.1fs", sec));
  if (f.any()) return {Status::fail, f.summary()};
  return {Status::pass, "200 matrices, max error " + fmt("%.3g", worst) + ", " +
                            fmt("%.2fs", sec)};
}

Outcome parallel_equivalence(const std::vector<t::CorpusMatrix>& corpus) {
  const auto t0 = Clock::now();
  Failures f;
  double worst = 0.0;
  std::size_t configs = 0, skipped = 0;
  for (const auto& e : corpus) {
    const Index n = e.sss.size();
    const DenseVector x = random_vector(n, 31);
    const DenseVector ref = spmv_sss_serial(e.sss, x);
    for (Index beta : betas_for(e.sss)) {
      const BandSplit s = split_bands(e.sss, beta);
      for (Index p : {1u, 2u, 3u, 4u, 8u}) {
        if (p > n) {
          ++skipped;
          continue;
        }
        const Classification c = classify_conflicts(s, partition_rows(n, p));
        const double err = max_relative_error(spmv_pars3(s, c.plan, x), ref).error;
        worst = std::max(worst, err);
        ++configs;
        if (!(err <= 1e-12))
          f.add(e.name + " beta " + std::to_string(beta) + " P " + std::to_string(p));
      }
    }
    for (unsigned threads : {1u, 2u, 4u, 8u}) {
      DenseVector y(n, 0.0);
      for (int rep = 0; rep < 100; ++rep) {
        spmv_atomic(e.sss, x, y, threads);
        const double err = max_relative_error(y, ref).error;
        worst = std::max(worst, err);
        if (!(err <= 1e-12)) {
          f.add(e.name + " atomic T " + std::to_string(threads) + " rep " +
                std::to_string(rep));
          break;
        }
      }
    }
  }
  const double sec = seconds_since(t0);
  if (sec >= 300.0) f.add("runtime " + fmt("%.1fs", sec));
  if (f.any()) return {Status::fail, f.summary()};
  return {Status::pass, std::to_string(configs) + " pars3 configs (" + std::to_string(skipped) +
                            " with P > n skipped), atomic T 1/2/4/8 x100, max error " +
                            fmt("%.3g", worst) + ", " + fmt("%.2fs", sec)};
}

Outcome skew_identity(const std::vector<t::CorpusMatrix>& corpus) {
  Failures f;
  std::size_t checked = 0;
  double worst = 0.0;
  for (const auto& e : corpus) {
    if (!e.strict()) continue;
    const Index n = e.sss.size();
    const DenseVector x = random_vector(n, 77);
    double xx = 0.0;
    for (double v : x) xx += v * v;
    const double bound = 1e-10 * xx * e.sss.max_abs_off_diagonal();
    const Index beta = std::max<Index>(1, std::min<Index>(4, compute_bandwidth(e.sss)));
    const BandSplit s = split_bands(e.sss, beta);
    const Classification c = classify_conflicts(s, partition_rows(n, std::min<Index>(4, n)));
    const std::vector<std::pair<std::string, DenseVector>> ys{
        {"serial", spmv_sss_serial(e.sss, x)},
        {"pars3", spmv_pars3(s, c.plan, x)},
        {"atomic", spmv_atomic(e.sss, x, 4)}};
    for (const auto& [kernel, y] : ys) {
      double dot = 0.0;
      for (Index i = 0; i < n; ++i) dot += x[i] * y[i];
      ++checked;
      if (bound > 0.0) worst = std::max(worst, std::abs(dot) / bound);
      if (!(std::abs(dot) <= bound)) f.add(e.name + " " + kernel + " x.y=" + fmt("%.3g", dot));
    }
  }
  if (f.any()) return {Status::fail, f.summary()};
  return {Status::pass, std::to_string(checked) + " kernel runs, worst |x.y|/bound " +
                            fmt("%.3g", worst)};
}

Outcome conservation(const std::vector<t::CorpusMatrix>& corpus) {
  Failures f;
  for (const auto& e : corpus) {
    const SssMatrix& m = e.sss;
    const Index n = m.size();
    for (Index beta : betas_for(m)) {
      const BandSplit s = split_bands(m, beta);
      if (s.diag.size() + s.middle.size() + s.outer.size() != m.off_diagonal_count() + n)
        f.add(e.name + " split sizes, beta " + std::to_string(beta));
      if (!t::bitwise_equal(merge_splits(s), m))
        f.add(e.name + " merge, beta " + std::to_string(beta));
    }
    const CooMatrix coo = sss_to_coo(m);
    const Permutation p = random_permutation(n, 3);
    if (!t::bitwise_equal(apply_permutation(apply_permutation(coo, p), p.inverted()), coo))
      f.add(e.name + " permutation round trip");
    if (!t::bitwise_equal(coo_to_sss(coo, e.strict() ? SkewMode::strict : SkewMode::shifted), m))
      f.add(e.name + " SSS round trip");
    {
      std::istringstream in(write_matrix_market(coo, MmQualifier::general));
      if (!t::bitwise_equal(read_matrix_market(in), coo)) f.add(e.name + " MM general");
    }
    if (e.strict()) {
      // the skew form has no diagonal lines; the SSS rebuild restores it
      std::istringstream in(write_matrix_market(coo, MmQualifier::skew_symmetric));
      if (!t::bitwise_equal(coo_to_sss(read_matrix_market(in), SkewMode::strict), m))
        f.add(e.name + " MM skew");
    }
  }
  if (f.any()) return {Status::fail, f.summary()};
  return {Status::pass, std::to_string(corpus.size()) +
                            " matrices: split sizes, merge, permutation, SSS and MM round trips"};
}

Outcome rcm_bandwidth_bounds() {
  Failures f;
  std::string notes;
  {
    const std::vector<t::Edge> five{{0, 2}, {2, 4}, {4, 1}, {1, 3}};
    const Index optimum = t::brute_force_min_bandwidth(5, five);
    if (optimum != 1) f.add("brute force optimum " + std::to_string(optimum));
    if (rcm_bandwidth(from_edges(5, five)) != 1) f.add("fixed 5-path");
  }
  for (Index n : {5u, 50u, 500u}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Permutation p = random_permutation(n, seed);
      std::vector<t::Edge> edges;
      for (Index i = 1; i < n; ++i) edges.push_back({p.forward()[i], p.forward()[i - 1]});
      const Index bw = rcm_bandwidth(from_edges(n, edges));
      if (bw != 1) f.add("path n " + std::to_string(n) + " bandwidth " + std::to_string(bw));
    }
  }
  Index worst_band = 0;
  for (Index hb : {1u, 2u, 5u, 10u, 20u}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Index n = 300 + 100 * static_cast<Index>(seed);
      const CooMatrix band = generate_band_skew(n, hb, 0.5, 0.0, seed * 31 + hb);
      const CooMatrix shuffled = apply_permutation(band, random_permutation(n, seed + 7));
      const Index bw = rcm_bandwidth(shuffled);
      worst_band = std::max(worst_band, bw);
      if (bw > 2 * hb)
        f.add("band hb " + std::to_string(hb) + " bandwidth " + std::to_string(bw));
      // cross-check with the textbook reference on the smaller cases
      if (n <= 400) {
        const auto edges = edges_of(shuffled);
        const Index reference = t::bandwidth_under(edges, t::textbook_rcm(n, edges));
        if (bw > std::max(reference, 2 * hb))
          f.add("band hb " + std::to_string(hb) + " worse than reference " +
                std::to_string(reference));
      }
    }
  }
  for (Index k : {10u, 30u}) {
    const CooMatrix grid = apply_permutation(generate_grid_skew(k, k),
                                             random_permutation(k * k, k));
    const Index bw = rcm_bandwidth(grid);
    notes += " grid" + std::to_string(k) + "=" + std::to_string(bw);
    if (bw > 2 * k) f.add("grid k " + std::to_string(k) + " bandwidth " + std::to_string(bw));
  }
  if (f.any()) return {Status::fail, f.summary()};
  return {Status::pass,
          "paths -> 1, 5-path optimum 1 by brute force," + notes + ", worst shuffled-band bandwidth " +
              std::to_string(worst_band)};
}

Outcome worked_example() {
  Failures f;
  const SssMatrix m = t::example4_sss();
  {
    // (3,0) at distance 3 sits in the middle split at beta 3; with one row per
    // worker, row 3 belongs to worker 3 and column 0 to worker 0
    const BandSplit s = split_bands(m, 3);
    const Classification c = classify_conflicts(s, partition_rows(4, 4));
    const DenseVector x{0.5, -1.0, 2.0, 3.0};
    Pars3Trace trace;
    const DenseVector y = spmv_pars3(s, c.plan, x, &trace);
    std::size_t hits = 0;
    for (const ConflictUpdate& u : trace.conflict_updates) {
      if (u.row != 3 || u.col != 0) continue;
      ++hits;
      if (u.worker != 3) f.add("A30 handled by worker " + std::to_string(u.worker));
      if (u.local_product != 5.0 * x[0]) f.add("A30 local product");
      if (u.target_worker != 0) f.add("A30 target worker");
      if (!(u.message == AccumulationMessage{0, -5.0 * x[3]})) f.add("A30 message");
    }
    if (hits != 1) f.add("A30 seen " + std::to_string(hits) + " times");
    if (y != spmv_sss_serial(m, x)) f.add("beta 3 P 4 result");
    if (trace.messages_sent != trace.messages_applied) f.add("messages lost");
  }
  {
    // beta 2, P 2: only (2,1) crosses a block boundary
    const BandSplit s = split_bands(m, 2);
    const Classification c = classify_conflicts(s, partition_rows(4, 2));
    Pars3Trace trace;
    const DenseVector y = spmv_pars3(s, c.plan, DenseVector{1, 1, 1, 1}, &trace);
    if (y != DenseVector{-7, -1, 2, 6}) f.add("beta 2 P 2 result");
    if (trace.conflict_updates.size() != 1 ||
        !(trace.conflict_updates[0].message == AccumulationMessage{1, -3.0}))
      f.add("beta 2 P 2 message");
    if (s.outer.size() != 1 || trace.coordinator_multiply_adds != 2)
      f.add("outer element not on the coordinator");
  }
  if (f.any()) return {Status::fail, f.summary()};
  return {Status::pass, "A30: local 5*x0 on worker 3, one message -5*x3 to row 0 on worker 0"};
}

Outcome complexity(const std::vector<t::CorpusMatrix>& corpus) {
  Failures f;
  std::size_t configs = 0;
  for (const auto& e : corpus) {
    const Index n = e.sss.size();
    const std::size_t expected = 2 * e.sss.off_diagonal_count() + n;
    if (count_ops(e.sss).multiply_adds != expected) f.add(e.name + " serial");
    const DenseVector x = random_vector(n, 2);
    for (Index beta : betas_for(e.sss)) {
      const BandSplit s = split_bands(e.sss, beta);
      for (Index p : {1u, 2u, 3u, 4u, 8u}) {
        if (p > n) continue;
        const Classification c = classify_conflicts(s, partition_rows(n, p));
        Pars3Trace trace;
        spmv_pars3(s, c.plan, x, &trace);
        ++configs;
        if (trace.total_multiply_adds() != expected)
          f.add(e.name + " pars3 beta " + std::to_string(beta) + " P " + std::to_string(p) +
                ": " + std::to_string(trace.total_multiply_adds()) + " vs " +
                std::to_string(expected));
      }
    }
  }
  if (f.any()) return {Status::fail, f.summary()};
  return {Status::pass, "2m+n exact for serial on " + std::to_string(corpus.size()) +
                            " matrices and pars3 on " + std::to_string(configs) + " configs"};
}

Outcome scaling_smoke() {
  const auto t0 = Clock::now();
  const SssMatrix m = coo_to_sss(generate_band_skew(200000, 64, 0.5, 0.0, 2024), SkewMode::strict);
  const Index beta = default_outer_bandwidth(m.size(), compute_bandwidth(m));
  const BandSplit s = split_bands(m, beta);
  std::vector<std::size_t> conflicts;
  for (Index p : {1u, 2u, 4u, 8u})
    conflicts.push_back(classify_conflicts(s, partition_rows(m.size(), p)).report.total_conflicts);
  std::string counts;
  for (std::size_t c : conflicts) counts += (counts.empty() ? "" : "/") + std::to_string(c);
  if (!std::ranges::is_sorted(conflicts))
    return {Status::fail, "conflicts for P 1/2/4/8 not non-decreasing: " + counts};

  BenchOptions o;
  o.kernels = {KernelKind::serial, KernelKind::pars3};
  o.workers = {4};
  o.reps = 5;
  o.beta = beta;
  const BenchReport r = run_benchmark(m, o);
  double speedup = 0.0;
  for (const BenchRun& run : r.runs)
    if (run.kernel == KernelKind::pars3) speedup = run.speedup;
  const double sec = seconds_since(t0);
  const unsigned cores = std::thread::hardware_concurrency();
  const std::string detail = "stored " + std::to_string(r.nnz) + ", conflicts P 1/2/4/8 " +
                             counts + ", P=4 speedup " + fmt("%.2f", speedup) + ", " +
                             std::to_string(cores) + " hardware threads, " + fmt("%.1fs", sec);
  if (sec >= 120.0) return {Status::fail, detail + " (runtime over 120s)"};
  if (speedup >= 1.5) return {Status::pass, detail};
  // timing below threshold: not gating, hard requirement only on dedicated hardware
  if (cores < 4) return {Status::warn, detail + " (fewer than 4 cores, speedup not measurable)"};
  return {Status::warn, detail + " (speedup below 1.5)"};
}

Outcome af5k101() {
  const char* path = std::getenv("PARS3_AF5K101");
  if (!path || !*path) return {Status::skip, "set PARS3_AF5K101 to the af_5_k101 .mtx to run"};
  const CooMatrix c = read_matrix_market_file(path);
  const Index bw = rcm_bandwidth(c);
  const std::string detail = "RCM bandwidth " + std::to_string(bw) + " (reference 1274)";
  if (bw <= 2 * 1274 && 2 * bw >= 1274) return {Status::pass, detail};
  return {Status::warn, detail + " outside factor 2"};
}

const char* label(Status s) {
  switch (s) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::warn: return "WARN";
    case Status::skip: return "SKIP";
  }
  return "?";
}

}  // namespace

int main() {
  const std::vector<t::CorpusMatrix> corpus = t::test_corpus();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 oracle equivalence", oracle_equivalence},
      {"AC2 parallel equivalence", [&] { return parallel_equivalence(corpus); }},
      {"AC3 skew identity", [&] { return skew_identity(corpus); }},
      {"AC4 conservation", [&] { return conservation(corpus); }},
      {"AC5 RCM bandwidth", rcm_bandwidth_bounds},
      {"AC6 worked example", worked_example},
      {"AC7 work accounting", [&] { return complexity(corpus); }},
      {"AC8 scaling smoke", scaling_smoke},
      {"AC9 af_5_k101 corroboration", af5k101},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {Status::fail, std::string("exception: ") + e.what()};
    }
    if (o.status == Status::fail) ++failed;
    std::printf("%s %s: %s\n", label(o.status), name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed ? 1 : 0;
}

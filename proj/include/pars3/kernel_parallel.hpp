#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "pars3/coo_matrix.hpp"
#include "pars3/split.hpp"
#include "pars3/sss_matrix.hpp"

namespace pars3 {

// Deferred contribution to y[target_row] in another worker's block.
struct AccumulationMessage {
  Index target_row = 0;
  double value = 0.0;

  friend bool operator==(const AccumulationMessage&, const AccumulationMessage&) = default;
};

// One processed conflict element as seen by an instrumented run.
struct ConflictUpdate {
  Index worker = 0;
  Index row = 0;
  Index col = 0;
  double local_product = 0.0;  // v * x[col], added to the worker's y[row]
  Index target_worker = 0;
  AccumulationMessage message;  // -v * x[row] for y[col]
};

// Filled by Pars3Engine::multiply when a trace is passed.
struct Pars3Trace {
  std::vector<std::size_t> worker_multiply_adds;  // diagonal + middle, per worker
  std::size_t coordinator_multiply_adds = 0;       // outer pass
  std::vector<ConflictUpdate> conflict_updates;     // by worker, storage order
  std::size_t messages_sent = 0;
  std::size_t messages_applied = 0;
  std::size_t halo_values_received = 0;
  // Violations; all zero in a correct run.
  std::size_t foreign_writes = 0;      // direct y writes outside the own block
  std::size_t misrouted_messages = 0;  // message row outside the receiver block
  std::size_t early_halo_reads = 0;    // halo read before its exchange finished
  std::size_t late_accumulations = 0;  // message applied after gather started

  std::size_t total_multiply_adds() const noexcept;
};

/// Parallel three-way banded skew SpMV over P workers.
///
/// Worker p owns rows [block_start[p], block_start[p+1]) of y and x. One
/// multiply runs these stages on P threads (worker 0 on the caller's thread):
///   1. scatter    copy of the owned x block
///   2. halo       push owned x slices to successors whose conflicts read them;
///                 the chain runs from lower to higher worker ids
///   3. diagonal   y[i] = diag[i] * x[i]
///   4. safe       middle elements with both ends owned, two local updates
///   5. conflict   after the halo arrived: y[i] += v * halo[c] locally and
///                 -v * x[i] queued as a message for owner(c)
///   6. outer      worker 0 alone turns every outer element into two addends
///   7. barrier, then each worker applies the messages addressed to it
///   8. gather     blocks are written in place; outer addends are added last
///
/// The split and plan are referenced, not copied, and must outlive the engine.
/// One engine runs one multiply at a time.
class Pars3Engine {
 public:
  // Throws StructuralError / ArgumentError if plan and split disagree or a
  // block is empty.
  Pars3Engine(const BandSplit& split, const PartitionPlan& plan);
  ~Pars3Engine();
  Pars3Engine(const Pars3Engine&) = delete;
  Pars3Engine& operator=(const Pars3Engine&) = delete;

  Index size() const noexcept { return split_->n; }
  Index worker_count() const noexcept { return plan_->worker_count(); }

  void multiply(std::span<const double> x, std::span<double> y,
                Pars3Trace* trace = nullptr);
  DenseVector multiply(std::span<const double> x, Pars3Trace* trace = nullptr);

 private:
  struct HaloSegment {
    Index target = 0;
    Index begin = 0;  // global x range [begin, end)
    Index end = 0;
  };
  struct Worker {
    std::vector<double> local_x;
    std::vector<double> halo_x;
    std::vector<HaloSegment> sends;
    std::uint32_t expected_segments = 0;
    std::vector<std::vector<AccumulationMessage>> outbox;  // by target worker
    std::vector<std::size_t> outbox_fill;
  };
  struct WorkerTrace;

  template <bool Traced>
  void run_worker(Index p, std::span<const double> x, std::span<double> y,
                  WorkerTrace* trace);

  const BandSplit* split_;
  const PartitionPlan* plan_;
  std::vector<Worker> workers_;
  std::unique_ptr<std::atomic<std::uint32_t>[]> halo_pending_;
  std::vector<AccumulationMessage> outer_addends_;
  struct Sync;
  std::unique_ptr<Sync> sync_;
};

// One-shot convenience over Pars3Engine.
DenseVector spmv_pars3(const BandSplit& split, const PartitionPlan& plan,
                       std::span<const double> x, Pars3Trace* trace = nullptr);

// Lock-free baseline: rows are split into contiguous chunks over `threads`
// threads with no conflict analysis. Each row's accumulator is flushed into
// y[i] and every mirror update into y[c] with an atomic add.
void spmv_atomic(const SssMatrix& m, std::span<const double> x,
                 std::span<double> y, unsigned threads);
DenseVector spmv_atomic(const SssMatrix& m, std::span<const double> x,
                        unsigned threads);

}  // namespace pars3

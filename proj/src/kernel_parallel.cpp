#include "pars3/kernel_parallel.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <string>
#include <thread>

#include "pars3/error.hpp"

namespace pars3 {

std::size_t Pars3Trace::total_multiply_adds() const noexcept {
  std::size_t total = coordinator_multiply_adds;
  for (std::size_t w : worker_multiply_adds) total += w;
  return total;
}

struct Pars3Engine::Sync {
  explicit Sync(std::ptrdiff_t workers) : messages_posted(workers) {}
  std::barrier<> messages_posted;
  std::atomic<bool> gather_started{false};
};

struct Pars3Engine::WorkerTrace {
  std::size_t multiply_adds = 0;
  std::size_t coordinator_multiply_adds = 0;
  std::vector<ConflictUpdate> conflicts;
  std::size_t messages_sent = 0;
  std::size_t messages_applied = 0;
  std::size_t halo_values_received = 0;
  std::size_t foreign_writes = 0;
  std::size_t misrouted_messages = 0;
  std::size_t early_halo_reads = 0;
  std::size_t late_accumulations = 0;
};

Pars3Engine::Pars3Engine(const BandSplit& split, const PartitionPlan& plan)
    : split_(&split), plan_(&plan) {
  const Index n = split.n;
  const Index workers = plan.worker_count();
  if (workers < 1) throw ArgumentError("plan has no workers");
  if (plan.block_start.size() != static_cast<std::size_t>(workers) + 1 ||
      plan.block_start.front() != 0 || plan.block_start.back() != n)
    throw StructuralError("plan boundaries do not cover the split's rows");
  if (split.middle.row_ptr.size() != static_cast<std::size_t>(n) + 1 ||
      split.diag.size() != n)
    throw StructuralError("split arrays do not match its dimension");

  const auto& row_ptr = split.middle.row_ptr;
  workers_.resize(workers);
  for (Index p = 0; p < workers; ++p) {
    const WorkerPlan& wp = plan.workers[p];
    if (wp.row_begin != plan.block_start[p] || wp.row_end != plan.block_start[p + 1])
      throw StructuralError("worker " + std::to_string(p) +
                            " rows disagree with plan boundaries");
    if (wp.rows() == 0)
      throw ArgumentError("worker " + std::to_string(p) +
                          " owns no rows; more workers than rows");
    if (wp.safe.size() != wp.rows())
      throw StructuralError("worker " + std::to_string(p) +
                            " safe ranges do not cover its rows");

    // Every middle element of the block must be either safe or a conflict.
    std::size_t in_block = row_ptr[wp.row_end] - row_ptr[wp.row_begin];
    if (wp.safe_count() + wp.conflicts.size() != in_block)
      throw StructuralError("worker " + std::to_string(p) +
                            " plan does not partition its middle elements");
    for (Index k = 0; k < wp.rows(); ++k) {
      const IndexRange r = wp.safe[k];
      const Index i = wp.row_begin + k;
      if (r.end != row_ptr[i + 1] || r.begin < row_ptr[i] ||
          (r.begin < r.end && split.middle.col_ind[r.begin] < wp.row_begin))
        throw StructuralError("worker " + std::to_string(p) +
                              " safe range invalid at row " + std::to_string(i));
    }

    Worker& w = workers_[p];
    w.local_x.resize(wp.rows());
    w.halo_x.resize(wp.row_begin - wp.halo_begin);
    w.outbox.resize(workers);
    w.outbox_fill.resize(workers);
    std::vector<std::size_t> per_target(workers, 0);
    for (const ConflictElement& ce : wp.conflicts) {
      if (ce.element >= split.middle.size() || ce.row < wp.row_begin ||
          ce.row >= wp.row_end)
        throw StructuralError("conflict element outside worker " +
                              std::to_string(p) + "'s block");
      const Index c = split.middle.col_ind[ce.element];
      if (c < wp.halo_begin || c >= wp.row_begin || ce.target_worker >= p ||
          c < plan.block_start[ce.target_worker] ||
          c >= plan.block_start[ce.target_worker + 1])
        throw StructuralError("conflict element with inconsistent target in worker " +
                              std::to_string(p));
      ++per_target[ce.target_worker];
    }
    for (Index t = 0; t < workers; ++t) w.outbox[t].resize(per_target[t]);
  }

  // Halo routing: worker q sends the part of its block inside p's halo.
  for (Index p = 0; p < workers; ++p) {
    const WorkerPlan& wp = plan.workers[p];
    if (wp.halo_begin == wp.row_begin) continue;
    for (Index q = plan.owner_of(wp.halo_begin); q < p; ++q) {
      const Index begin = std::max(wp.halo_begin, plan.block_start[q]);
      const Index end = plan.block_start[q + 1];
      workers_[q].sends.push_back({p, begin, end});
      ++workers_[p].expected_segments;
    }
  }
  for (Worker& w : workers_)
    std::sort(w.sends.begin(), w.sends.end(),
              [](const HaloSegment& a, const HaloSegment& b) { return a.target < b.target; });

  halo_pending_ = std::make_unique<std::atomic<std::uint32_t>[]>(workers);
  outer_addends_.resize(2 * split.outer.size());
  sync_ = std::make_unique<Sync>(workers);
}

Pars3Engine::~Pars3Engine() = default;

template <bool Traced>
void Pars3Engine::run_worker(Index p, std::span<const double> x,
                             std::span<double> y, WorkerTrace* trace) {
  const WorkerPlan& wp = plan_->workers[p];
  Worker& self = workers_[p];
  const Index rb = wp.row_begin;
  const Index re = wp.row_end;
  const Index hb = wp.halo_begin;
  const Index* col = split_->middle.col_ind.data();
  const double* val = split_->middle.values.data();
  const double* diag = split_->diag.data();
  double* local_x = self.local_x.data();
  double* local_y = y.data() + rb;

  auto note_write = [&](Index global_row) {
    if constexpr (Traced) {
      if (global_row < rb || global_row >= re) ++trace->foreign_writes;
    }
  };

  // 1. scatter
  std::copy(x.begin() + rb, x.begin() + re, local_x);

  // 2. halo push, nearest successor first
  for (const HaloSegment& seg : self.sends) {
    Worker& dst = workers_[seg.target];
    const Index dst_hb = plan_->workers[seg.target].halo_begin;
    std::copy(local_x + (seg.begin - rb), local_x + (seg.end - rb),
              dst.halo_x.begin() + (seg.begin - dst_hb));
    halo_pending_[seg.target].fetch_sub(1, std::memory_order_release);
    halo_pending_[seg.target].notify_all();
  }

  // 3. diagonal
  for (Index k = 0; k < re - rb; ++k) {
    local_y[k] = diag[rb + k] * local_x[k];
    note_write(rb + k);
  }
  if constexpr (Traced) trace->multiply_adds += re - rb;

  // 4. safe middle elements
  for (Index k = 0; k < re - rb; ++k) {
    const IndexRange r = wp.safe[k];
    const double xi = local_x[k];
    double acc = 0.0;
    for (std::size_t j = r.begin; j < r.end; ++j) {
      const Index c = col[j] - rb;
      const double v = val[j];
      acc += v * local_x[c];
      local_y[c] -= v * xi;
      note_write(rb + c);
    }
    local_y[k] += acc;
    note_write(rb + k);
    if constexpr (Traced) trace->multiply_adds += 2 * r.size();
  }

  // 5. conflict elements, once the halo is complete
  for (std::uint32_t left = halo_pending_[p].load(std::memory_order_acquire);
       left != 0; left = halo_pending_[p].load(std::memory_order_acquire))
    halo_pending_[p].wait(left, std::memory_order_acquire);
  if constexpr (Traced) trace->halo_values_received = self.halo_x.size();

  std::fill(self.outbox_fill.begin(), self.outbox_fill.end(), 0);
  for (const ConflictElement& ce : wp.conflicts) {
    const Index c = col[ce.element];
    const double v = val[ce.element];
    if constexpr (Traced) {
      if (halo_pending_[p].load(std::memory_order_acquire) != 0) ++trace->early_halo_reads;
    }
    const double mul1 = v * self.halo_x[c - hb];
    local_y[ce.row - rb] += mul1;
    note_write(ce.row);
    const AccumulationMessage msg{c, -v * local_x[ce.row - rb]};
    self.outbox[ce.target_worker][self.outbox_fill[ce.target_worker]++] = msg;
    if constexpr (Traced) {
      trace->multiply_adds += 2;
      ++trace->messages_sent;
      trace->conflicts.push_back({p, ce.row, c, mul1, ce.target_worker, msg});
    }
  }

  // 6. outer split, coordinator only
  if (p == 0) {
    const auto& outer = split_->outer;
    for (std::size_t k = 0; k < outer.size(); ++k) {
      const Triplet& t = outer[k];
      outer_addends_[2 * k] = {t.row, t.value * x[t.col]};
      outer_addends_[2 * k + 1] = {t.col, -t.value * x[t.row]};
    }
    if constexpr (Traced) trace->coordinator_multiply_adds = 2 * outer.size();
  }

  // 7. every message is posted before anyone applies
  sync_->messages_posted.arrive_and_wait();
  for (Index s = p + 1; s < worker_count(); ++s) {
    for (const AccumulationMessage& msg : workers_[s].outbox[p]) {
      if constexpr (Traced) {
        if (msg.target_row < rb || msg.target_row >= re) {
          ++trace->misrouted_messages;
          continue;
        }
        if (sync_->gather_started.load(std::memory_order_acquire))
          ++trace->late_accumulations;
        ++trace->messages_applied;
      }
      local_y[msg.target_row - rb] += msg.value;
    }
  }
}

void Pars3Engine::multiply(std::span<const double> x, std::span<double> y,
                           Pars3Trace* trace) {
  const Index n = size();
  if (x.size() != n || y.size() != n)
    throw ArgumentError("vector length does not match matrix dimension " +
                        std::to_string(n));
  const Index workers = worker_count();
  for (Index p = 0; p < workers; ++p)
    halo_pending_[p].store(workers_[p].expected_segments, std::memory_order_relaxed);
  sync_->gather_started.store(false, std::memory_order_relaxed);

  std::vector<WorkerTrace> traces(trace ? workers : 0);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers - 1);
    for (Index p = 1; p < workers; ++p) {
      if (trace)
        threads.emplace_back([this, p, x, y, &traces] { run_worker<true>(p, x, y, &traces[p]); });
      else
        threads.emplace_back([this, p, x, y] { run_worker<false>(p, x, y, nullptr); });
    }
    if (trace)
      run_worker<true>(0, x, y, &traces[0]);
    else
      run_worker<false>(0, x, y, nullptr);
  }

  // 8. gather: blocks are already in place
  sync_->gather_started.store(true, std::memory_order_release);
  for (const AccumulationMessage& a : outer_addends_) y[a.target_row] += a.value;

  if (trace) {
    *trace = Pars3Trace{};
    trace->worker_multiply_adds.resize(workers);
    for (Index p = 0; p < workers; ++p) {
      WorkerTrace& t = traces[p];
      trace->worker_multiply_adds[p] = t.multiply_adds;
      trace->coordinator_multiply_adds += t.coordinator_multiply_adds;
      trace->conflict_updates.insert(trace->conflict_updates.end(),
                                     t.conflicts.begin(), t.conflicts.end());
      trace->messages_sent += t.messages_sent;
      trace->messages_applied += t.messages_applied;
      trace->halo_values_received += t.halo_values_received;
      trace->foreign_writes += t.foreign_writes;
      trace->misrouted_messages += t.misrouted_messages;
      trace->early_halo_reads += t.early_halo_reads;
      trace->late_accumulations += t.late_accumulations;
    }
  }
}

DenseVector Pars3Engine::multiply(std::span<const double> x, Pars3Trace* trace) {
  DenseVector y(size());
  multiply(x, y, trace);
  return y;
}

DenseVector spmv_pars3(const BandSplit& split, const PartitionPlan& plan,
                       std::span<const double> x, Pars3Trace* trace) {
  Pars3Engine engine(split, plan);
  return engine.multiply(x, trace);
}

// ---------------------------------------------------------------------------

namespace {

void atomic_rows(const SssMatrix& m, std::span<const double> x,
                 std::span<double> y, Index begin, Index end) {
  const std::size_t* row_ptr = m.row_ptr().data();
  const Index* col_ind = m.col_ind().data();
  const double* vals = m.off_diags().data();
  const double* diags = m.diags().data();
  for (Index i = begin; i < end; ++i) {
    const double xi = x[i];
    double acc = diags[i] * xi;
    for (std::size_t j = row_ptr[i]; j < row_ptr[i + 1]; ++j) {
      const Index c = col_ind[j];
      const double v = vals[j];
      acc += v * x[c];
      std::atomic_ref<double>(y[c]).fetch_sub(v * xi, std::memory_order_relaxed);
    }
    std::atomic_ref<double>(y[i]).fetch_add(acc, std::memory_order_relaxed);
  }
}

}  // namespace

void spmv_atomic(const SssMatrix& m, std::span<const double> x,
                 std::span<double> y, unsigned threads) {
  const Index n = m.size();
  if (x.size() != n || y.size() != n)
    throw ArgumentError("vector length does not match matrix dimension " +
                        std::to_string(n));
  if (threads < 1) throw ArgumentError("atomic kernel needs at least one thread");
  if (n == 0) return;
  const Index workers = std::min<Index>(threads, n);
  const std::vector<Index> bounds = partition_rows(n, workers);

  std::barrier<> zeroed(workers);
  auto body = [&](Index t) {
    std::fill(y.begin() + bounds[t], y.begin() + bounds[t + 1], 0.0);
    zeroed.arrive_and_wait();
    atomic_rows(m, x, y, bounds[t], bounds[t + 1]);
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (Index t = 1; t < workers; ++t) pool.emplace_back(body, t);
  body(0);
}

DenseVector spmv_atomic(const SssMatrix& m, std::span<const double> x,
                        unsigned threads) {
  DenseVector y(m.size());
  spmv_atomic(m, x, y, threads);
  return y;
}

}  // namespace pars3

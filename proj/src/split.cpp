#include "pars3/split.hpp"

#include <algorithm>
#include <string>

#include "pars3/error.hpp"

namespace pars3 {

BandSplit split_bands(const SssMatrix& m, Index beta) {
  if (beta < 1) throw ArgumentError("outer bandwidth must be at least 1");

  const Index n = m.size();
  const auto row_ptr = m.row_ptr();
  const auto col_ind = m.col_ind();
  const auto vals = m.off_diags();

  BandSplit s;
  s.n = n;
  s.beta = beta;
  s.diag.assign(m.diags().begin(), m.diags().end());
  s.middle.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  s.middle.col_ind.reserve(m.off_diagonal_count());
  s.middle.values.reserve(m.off_diagonal_count());

  for (Index i = 0; i < n; ++i) {
    for (std::size_t j = row_ptr[i]; j < row_ptr[i + 1]; ++j) {
      const Index c = col_ind[j];
      if (i - c <= beta) {
        s.middle.col_ind.push_back(c);
        s.middle.values.push_back(vals[j]);
      } else {
        s.outer.push_back({i, c, vals[j]});
      }
    }
    s.middle.row_ptr[i + 1] = s.middle.col_ind.size();
  }
  return s;
}

SssMatrix merge_splits(const BandSplit& s) {
  const Index n = s.n;
  const MiddleSplit& mid = s.middle;
  if (s.diag.size() != n || mid.row_ptr.size() != static_cast<std::size_t>(n) + 1 ||
      mid.row_ptr.front() != 0 || mid.row_ptr.back() != mid.col_ind.size() ||
      mid.col_ind.size() != mid.values.size())
    throw StructuralError("band split arrays have inconsistent counts");

  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Index> col_ind;
  std::vector<double> vals;
  col_ind.reserve(mid.size() + s.outer.size());
  vals.reserve(mid.size() + s.outer.size());

  // Within a row every outer column precedes every middle column.
  std::size_t o = 0;
  for (Index i = 0; i < n; ++i) {
    if (o < s.outer.size() && s.outer[o].row < i)
      throw StructuralError("outer split is not in row-major order");
    for (; o < s.outer.size() && s.outer[o].row == i; ++o) {
      if (i - s.outer[o].col <= s.beta || s.outer[o].col >= i)
        throw StructuralError("outer element within the middle band");
      col_ind.push_back(s.outer[o].col);
      vals.push_back(s.outer[o].value);
    }
    for (std::size_t j = mid.row_ptr[i]; j < mid.row_ptr[i + 1]; ++j) {
      if (mid.col_ind[j] >= i || i - mid.col_ind[j] > s.beta)
        throw StructuralError("middle element outside the middle band");
      col_ind.push_back(mid.col_ind[j]);
      vals.push_back(mid.values[j]);
    }
    row_ptr[i + 1] = col_ind.size();
  }
  if (o != s.outer.size()) throw StructuralError("outer element beyond last row");

  return SssMatrix(n, std::move(row_ptr), std::move(col_ind), std::move(vals),
                   s.diag);
}

std::vector<Index> partition_rows(Index n, Index workers) {
  if (workers < 1 || workers > n)
    throw ArgumentError("worker count " + std::to_string(workers) +
                        " must lie in [1, " + std::to_string(n) + "]");
  const Index base = n / workers;
  const Index extra = n % workers;
  std::vector<Index> bounds(static_cast<std::size_t>(workers) + 1, 0);
  for (Index p = 0; p < workers; ++p)
    bounds[p + 1] = bounds[p] + base + (p < extra ? 1 : 0);
  return bounds;
}

std::size_t WorkerPlan::safe_count() const noexcept {
  std::size_t total = 0;
  for (const IndexRange& r : safe) total += r.size();
  return total;
}

Index PartitionPlan::owner_of(Index row) const noexcept {
  const auto it = std::upper_bound(block_start.begin(), block_start.end(), row);
  return static_cast<Index>(it - block_start.begin()) - 1;
}

Classification classify_conflicts(const BandSplit& s,
                                  std::span<const Index> boundaries) {
  if (boundaries.size() < 2 || boundaries.front() != 0 || boundaries.back() != s.n ||
      !std::is_sorted(boundaries.begin(), boundaries.end()))
    throw ArgumentError("row boundaries do not partition the split's rows");
  if (s.middle.row_ptr.size() != static_cast<std::size_t>(s.n) + 1)
    throw StructuralError("middle split row pointer has the wrong length");

  Classification out;
  PartitionPlan& plan = out.plan;
  plan.block_start.assign(boundaries.begin(), boundaries.end());
  const auto workers = static_cast<Index>(boundaries.size() - 1);
  plan.workers.resize(workers);
  out.report.per_worker.resize(workers);

  const auto& row_ptr = s.middle.row_ptr;
  const auto& col_ind = s.middle.col_ind;

  for (Index p = 0; p < workers; ++p) {
    WorkerPlan& w = plan.workers[p];
    w.row_begin = boundaries[p];
    w.row_end = boundaries[p + 1];
    w.halo_begin = w.row_begin;
    w.safe.reserve(w.rows());

    for (Index i = w.row_begin; i < w.row_end; ++i) {
      std::size_t j = row_ptr[i];
      const std::size_t end = row_ptr[i + 1];
      for (; j < end && col_ind[j] < w.row_begin; ++j) {
        const Index c = col_ind[j];
        w.conflicts.push_back({j, i, plan.owner_of(c)});
        w.halo_begin = std::min(w.halo_begin, c);
      }
      w.safe.push_back({j, end});
    }

    WorkerConflictStats& stats = out.report.per_worker[p];
    stats.rows = w.rows();
    stats.safe = w.safe_count();
    stats.conflicts = w.conflicts.size();
    out.report.total_conflicts += stats.conflicts;
  }
  out.report.outer_count = s.outer.size();
  return out;
}

}  // namespace pars3

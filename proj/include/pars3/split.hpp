#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pars3/coo_matrix.hpp"
#include "pars3/sss_matrix.hpp"

namespace pars3 {

// Off-diagonals within distance beta of the diagonal, SSS layout.
struct MiddleSplit {
  std::vector<std::size_t> row_ptr{0};
  std::vector<Index> col_ind;
  std::vector<double> values;

  std::size_t size() const noexcept { return col_ind.size(); }
};

/// Three-way decomposition of a band SSS matrix.
///
/// An off-diagonal (i, c, v) at distance d = i - c goes to `middle` when
/// d <= beta and to `outer` otherwise; `outer` keeps row-major order.
/// middle.size() + outer.size() + n equals the stored entries of the source
/// plus its n diagonal slots, and merge_splits() restores the source exactly.
struct BandSplit {
  Index n = 0;
  Index beta = 1;
  std::vector<double> diag;
  MiddleSplit middle;
  std::vector<Triplet> outer;
};

// Throws ArgumentError when beta < 1.
BandSplit split_bands(const SssMatrix& m, Index beta);

// Throws StructuralError when the split arrays are inconsistent.
SssMatrix merge_splits(const BandSplit& s);

// Block boundaries for P workers over n rows: the first n % P blocks get
// ceil(n / P) rows, the rest floor(n / P). Throws ArgumentError unless
// 1 <= P <= n.
std::vector<Index> partition_rows(Index n, Index workers);

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// Middle element whose mirror update lands in another worker's block.
struct ConflictElement {
  std::size_t element = 0;  // index into MiddleSplit arrays
  Index row = 0;
  Index target_worker = 0;  // owner of col_ind[element]

  friend bool operator==(const ConflictElement&, const ConflictElement&) = default;
};

struct WorkerPlan {
  Index row_begin = 0;
  Index row_end = 0;
  // One range per owned row (row_begin + k): the row's middle elements whose
  // column is owned by this worker. Columns ascend, so these form the tail of
  // the row and the conflicts form its head.
  std::vector<IndexRange> safe;
  std::vector<ConflictElement> conflicts;  // storage order
  // x entries [halo_begin, row_begin) referenced by the conflicts; empty when
  // halo_begin == row_begin.
  Index halo_begin = 0;

  Index rows() const noexcept { return row_end - row_begin; }
  std::size_t safe_count() const noexcept;
};

struct PartitionPlan {
  std::vector<Index> block_start;  // P + 1 boundaries
  std::vector<WorkerPlan> workers;

  Index worker_count() const noexcept { return static_cast<Index>(workers.size()); }
  Index owner_of(Index row) const noexcept;
};

struct WorkerConflictStats {
  Index rows = 0;
  std::size_t safe = 0;
  std::size_t conflicts = 0;
};

struct ConflictReport {
  std::vector<WorkerConflictStats> per_worker;
  std::size_t total_conflicts = 0;
  std::size_t outer_count = 0;
};

struct Classification {
  PartitionPlan plan;
  ConflictReport report;
};

// Single pass over the middle split. Element (i, c) belongs to owner(i); it
// is safe when owner(c) == owner(i), otherwise a conflict targeting owner(c).
// Outer elements are left to the coordinator and only counted.
Classification classify_conflicts(const BandSplit& s,
                                  std::span<const Index> boundaries);

}  // namespace pars3

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pars3 {

// Row/column index. 32 bits keeps the column arrays of the kernels compact.
using Index = std::uint32_t;

using DenseVector = std::vector<double>;

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

// Square sparse matrix in coordinate form; the ingestion and interchange
// representation. Entries are bounds-checked on construction but may be in
// any order until passed through coo_normalize.
class CooMatrix {
 public:
  CooMatrix() = default;
  // Throws StructuralError naming the first entry outside [0, n).
  explicit CooMatrix(Index n, std::vector<Triplet> entries = {});

  Index size() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  std::span<const Triplet> entries() const noexcept { return entries_; }

  // Sorted by (row, col) with no duplicate coordinates.
  bool is_normalized() const noexcept;

  friend bool operator==(const CooMatrix&, const CooMatrix&) = default;

 private:
  Index n_ = 0;
  std::vector<Triplet> entries_;
};

// Sorts by (row, col) and merges duplicates by summation. Entries whose sum
// is exactly zero stay as explicit zeros.
CooMatrix coo_normalize(CooMatrix m);

}  // namespace pars3

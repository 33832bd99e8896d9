#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pars3/coo_matrix.hpp"

namespace pars3 {

// Compressed row storage of a general square matrix (all nonzeros).
class CsrMatrix {
 public:
  CsrMatrix() = default;
  // Throws StructuralError if row_ptr is not monotone or columns are not
  // strictly increasing within a row.
  CsrMatrix(Index n, std::vector<std::size_t> row_ptr,
            std::vector<Index> col_ind, std::vector<double> values);

  Index size() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return col_ind_.size(); }
  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const Index> col_ind() const noexcept { return col_ind_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  Index n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Index> col_ind_;
  std::vector<double> values_;
};

CsrMatrix coo_to_csr(const CooMatrix& m);

}  // namespace pars3

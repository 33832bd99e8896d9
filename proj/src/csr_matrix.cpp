#include "pars3/csr_matrix.hpp"

#include <string>

#include "pars3/error.hpp"

namespace pars3 {

CsrMatrix::CsrMatrix(Index n, std::vector<std::size_t> row_ptr,
                     std::vector<Index> col_ind, std::vector<double> values)
    : n_(n),
      row_ptr_(std::move(row_ptr)),
      col_ind_(std::move(col_ind)),
      values_(std::move(values)) {
  if (row_ptr_.size() != static_cast<std::size_t>(n_) + 1 ||
      row_ptr_.front() != 0 || row_ptr_.back() != col_ind_.size() ||
      col_ind_.size() != values_.size())
    throw StructuralError("CSR arrays have inconsistent lengths");
  for (Index i = 0; i < n_; ++i) {
    if (row_ptr_[i + 1] < row_ptr_[i])
      throw StructuralError("CSR row pointer decreases at row " +
                            std::to_string(i));
    for (std::size_t j = row_ptr_[i]; j < row_ptr_[i + 1]; ++j) {
      if (col_ind_[j] >= n_ || (j > row_ptr_[i] && col_ind_[j] <= col_ind_[j - 1]))
        throw StructuralError("CSR columns invalid in row " + std::to_string(i));
    }
  }
}

CsrMatrix coo_to_csr(const CooMatrix& input) {
  const CooMatrix m = coo_normalize(input);
  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(m.size()) + 1, 0);
  std::vector<Index> col_ind;
  std::vector<double> values;
  col_ind.reserve(m.nnz());
  values.reserve(m.nnz());
  for (const Triplet& t : m.entries()) {
    ++row_ptr[t.row + 1];
    col_ind.push_back(t.col);
    values.push_back(t.value);
  }
  for (Index i = 0; i < m.size(); ++i) row_ptr[i + 1] += row_ptr[i];
  return CsrMatrix(m.size(), std::move(row_ptr), std::move(col_ind),
                   std::move(values));
}

}  // namespace pars3

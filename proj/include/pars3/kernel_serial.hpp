#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pars3/coo_matrix.hpp"
#include "pars3/sss_matrix.hpp"

namespace pars3 {

// Row-major dense square matrix; only used as ground truth.
class DenseMatrix {
 public:
  explicit DenseMatrix(Index n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

  Index size() const noexcept { return n_; }
  double& operator()(Index i, Index j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(Index i, Index j) const {
    return a_[static_cast<std::size_t>(i) * n_ + j];
  }

 private:
  Index n_;
  std::vector<double> a_;
};

DenseMatrix to_dense(const CooMatrix& m);  // duplicates are summed
DenseMatrix to_dense(const SssMatrix& m);

// y[i] = sum_j a(i, j) * x[j], ascending j. ArgumentError on size mismatch.
DenseVector spmv_dense_oracle(const DenseMatrix& a, std::span<const double> x);

// Serial SSS multiply. Each stored off-diagonal is read once and applied
// twice: +v * x[c] into row i's register accumulator, -v * x[i] into y[c].
// The accumulator, seeded with diags[i] * x[i], is flushed once per row.
void spmv_sss_serial(const SssMatrix& m, std::span<const double> x,
                     std::span<double> y);
DenseVector spmv_sss_serial(const SssMatrix& m, std::span<const double> x);

struct OpCounter {
  std::size_t multiply_adds = 0;
  std::size_t element_reads = 0;

  friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

// Counts measured by running an instrumented copy of the serial kernel.
OpCounter count_ops(const SssMatrix& m);

struct ErrorLocation {
  double error = 0.0;  // max_i |a[i] - ref[i]| / max(1, max_i |ref[i]|)
  std::size_t row = 0;  // argmax of |a[i] - ref[i]|
};

ErrorLocation max_relative_error(std::span<const double> a,
                                 std::span<const double> ref);

}  // namespace pars3

#include "pars3/kernel_serial.hpp"

#include <algorithm>
#include <cmath>

#include "pars3/error.hpp"

namespace pars3 {

namespace {

void check_sizes(Index n, std::size_t x, std::size_t y) {
  if (x != n || y != n)
    throw ArgumentError("vector length does not match matrix dimension " +
                        std::to_string(n));
}

template <bool Counted>
void serial_pass(const SssMatrix& m, std::span<const double> x,
                 std::span<double> y, OpCounter* counter) {
  const Index n = m.size();
  const std::size_t* row_ptr = m.row_ptr().data();
  const Index* col_ind = m.col_ind().data();
  const double* vals = m.off_diags().data();
  const double* diags = m.diags().data();

  std::fill(y.begin(), y.end(), 0.0);
  for (Index i = 0; i < n; ++i) {
    const double xi = x[i];
    double acc = diags[i] * xi;
    if constexpr (Counted) {
      ++counter->element_reads;
      ++counter->multiply_adds;
    }
    for (std::size_t j = row_ptr[i]; j < row_ptr[i + 1]; ++j) {
      const Index c = col_ind[j];
      const double v = vals[j];
      acc += v * x[c];
      y[c] -= v * xi;
      if constexpr (Counted) {
        ++counter->element_reads;
        counter->multiply_adds += 2;
      }
    }
    y[i] += acc;
  }
}

}  // namespace

DenseMatrix to_dense(const CooMatrix& m) {
  DenseMatrix a(m.size());
  for (const Triplet& t : m.entries()) a(t.row, t.col) += t.value;
  return a;
}

DenseMatrix to_dense(const SssMatrix& m) {
  DenseMatrix a(m.size());
  const auto row_ptr = m.row_ptr();
  for (Index i = 0; i < m.size(); ++i) {
    a(i, i) = m.diags()[i];
    for (std::size_t j = row_ptr[i]; j < row_ptr[i + 1]; ++j) {
      a(i, m.col_ind()[j]) = m.off_diags()[j];
      a(m.col_ind()[j], i) = -m.off_diags()[j];
    }
  }
  return a;
}

DenseVector spmv_dense_oracle(const DenseMatrix& a, std::span<const double> x) {
  const Index n = a.size();
  check_sizes(n, x.size(), n);
  DenseVector y(n, 0.0);
  for (Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Index j = 0; j < n; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

void spmv_sss_serial(const SssMatrix& m, std::span<const double> x,
                     std::span<double> y) {
  check_sizes(m.size(), x.size(), y.size());
  serial_pass<false>(m, x, y, nullptr);
}

DenseVector spmv_sss_serial(const SssMatrix& m, std::span<const double> x) {
  DenseVector y(m.size());
  spmv_sss_serial(m, x, y);
  return y;
}

OpCounter count_ops(const SssMatrix& m) {
  OpCounter counter;
  const DenseVector x(m.size(), 1.0);
  DenseVector y(m.size());
  serial_pass<true>(m, x, y, &counter);
  return counter;
}

ErrorLocation max_relative_error(std::span<const double> a,
                                 std::span<const double> ref) {
  if (a.size() != ref.size()) throw ArgumentError("vector length mismatch");
  ErrorLocation loc;
  double diff_max = 0.0;
  double ref_max = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - ref[i]);
    // NaN differences must not hide.
    if (d > diff_max || (std::isnan(d) && !std::isnan(diff_max))) {
      diff_max = d;
      loc.row = i;
    }
    ref_max = std::max(ref_max, std::abs(ref[i]));
  }
  loc.error = diff_max / std::max(1.0, ref_max);
  return loc;
}

}  // namespace pars3

#include "pars3/sss_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pars3/error.hpp"
#include "pars3/validate.hpp"
#include "coo_lookup.hpp"

namespace pars3 {

namespace {

std::string coord(Index r, Index c) {
  return "(" + std::to_string(r) + ", " + std::to_string(c) + ")";
}

}  // namespace

SssMatrix::SssMatrix(Index n, std::vector<std::size_t> row_ptr,
                     std::vector<Index> col_ind, std::vector<double> off_diags,
                     std::vector<double> diags)
    : n_(n),
      row_ptr_(std::move(row_ptr)),
      col_ind_(std::move(col_ind)),
      off_diags_(std::move(off_diags)),
      diags_(std::move(diags)) {
  if (row_ptr_.size() != static_cast<std::size_t>(n_) + 1)
    throw StructuralError("SSS row pointer array must have n + 1 entries");
  if (row_ptr_.front() != 0)
    throw StructuralError("SSS row pointer must start at 0");
  if (col_ind_.size() != off_diags_.size() || row_ptr_.back() != col_ind_.size())
    throw StructuralError(
        "SSS row pointer end, column count and value count disagree");
  if (diags_.size() != n_)
    throw StructuralError("SSS diagonal array must have n entries");

  for (Index i = 0; i < n_; ++i) {
    const std::size_t begin = row_ptr_[i];
    const std::size_t end = row_ptr_[i + 1];
    if (end < begin)
      throw StructuralError("SSS row pointer decreases at row " +
                            std::to_string(i));
    for (std::size_t j = begin; j < end; ++j) {
      if (col_ind_[j] >= i)
        throw StructuralError("SSS entry " + coord(i, col_ind_[j]) +
                              " is not strictly lower");
      if (j > begin && col_ind_[j] <= col_ind_[j - 1])
        throw StructuralError("SSS columns not strictly increasing in row " +
                              std::to_string(i));
    }
  }
  for (double d : diags_) {
    if (d != diags_.front())
      throw DiagonalError(
          "SSS diagonal must be all zero or one constant shift");
  }
}

double SssMatrix::max_abs_off_diagonal() const noexcept {
  double m = 0.0;
  for (double v : off_diags_) m = std::max(m, std::abs(v));
  return m;
}

SssMatrix coo_to_sss(const CooMatrix& input, SkewMode mode,
                     std::optional<double> tolerance) {
  const CooMatrix m = coo_normalize(input);
  const double tol = tolerance.value_or(default_skew_tolerance(m));
  const SkewReport report = validate_skew(m, tol);

  if (!report.pattern_asymmetries.empty()) {
    const auto [r, c] = report.pattern_asymmetries.front();
    throw StructuralError("asymmetric pattern: " + coord(r, c) +
                          " has no mirror entry (" +
                          std::to_string(report.pattern_asymmetries.size()) +
                          " unmatched entries)");
  }
  if (!report.value_violations.empty()) {
    const SkewViolation& v = report.value_violations.front();
    throw SkewViolationError(
        "skew violation at " + coord(v.row, v.col) +
            ": |A[i][j] + A[j][i]| = " + std::to_string(v.magnitude) + " (" +
            std::to_string(report.value_violations.size()) + " violations)",
        v.row, v.col);
  }
  if (report.diagonal == DiagonalClass::irregular)
    throw DiagonalError("diagonal is neither zero nor a constant shift");
  if (mode == SkewMode::strict && report.diagonal != DiagonalClass::zero)
    throw DiagonalError("strict skew matrix must have a zero diagonal");

  const Index n = m.size();
  const double alpha =
      report.diagonal == DiagonalClass::constant ? report.alpha : 0.0;

  // Lower entries come out of a normalized COO already row-major with
  // ascending columns. Unmatched upper entries (tolerated near-zeros) are
  // mirrored in, which requires a re-sort.
  const detail::CooLookup lookup(m);
  std::vector<Triplet> lower;
  bool needs_sort = false;
  for (const Triplet& t : m.entries()) {
    if (t.row > t.col) {
      lower.push_back(t);
    } else if (t.row < t.col && !lookup.find(t.col, t.row)) {
      lower.push_back({t.col, t.row, -t.value});
      needs_sort = true;
    }
  }
  if (needs_sort) {
    std::sort(lower.begin(), lower.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
  }

  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Index> col_ind;
  std::vector<double> off_diags;
  col_ind.reserve(lower.size());
  off_diags.reserve(lower.size());
  for (const Triplet& t : lower) {
    ++row_ptr[t.row + 1];
    col_ind.push_back(t.col);
    off_diags.push_back(t.value);
  }
  for (Index i = 0; i < n; ++i) row_ptr[i + 1] += row_ptr[i];

  return SssMatrix(n, std::move(row_ptr), std::move(col_ind),
                   std::move(off_diags), std::vector<double>(n, alpha));
}

CooMatrix sss_to_coo(const SssMatrix& m) {
  const Index n = m.size();
  const auto row_ptr = m.row_ptr();
  const auto col_ind = m.col_ind();
  const auto vals = m.off_diags();

  // Row i of the output: lower entries, the diagonal, then mirrored uppers.
  std::vector<std::size_t> upper_count(n, 0);
  for (Index c : col_ind) ++upper_count[c];
  std::vector<std::size_t> offset(static_cast<std::size_t>(n) + 1, 0);
  for (Index i = 0; i < n; ++i)
    offset[i + 1] = offset[i] + (row_ptr[i + 1] - row_ptr[i]) + 1 + upper_count[i];

  std::vector<Triplet> out(offset[n]);
  std::vector<std::size_t> upper_cursor(n);
  for (Index i = 0; i < n; ++i) {
    std::size_t pos = offset[i];
    for (std::size_t j = row_ptr[i]; j < row_ptr[i + 1]; ++j)
      out[pos++] = {i, col_ind[j], vals[j]};
    out[pos++] = {i, i, m.diags()[i]};
    upper_cursor[i] = pos;
  }
  // Scanning source rows ascending fills each row's uppers in column order.
  for (Index r = 0; r < n; ++r) {
    for (std::size_t j = row_ptr[r]; j < row_ptr[r + 1]; ++j) {
      const Index c = col_ind[j];
      out[upper_cursor[c]++] = {c, r, -vals[j]};
    }
  }
  return CooMatrix(n, std::move(out));
}

}  // namespace pars3

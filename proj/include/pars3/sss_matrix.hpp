#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pars3/coo_matrix.hpp"

namespace pars3 {

/// Symmetric Sparse Skyline storage of a skew-symmetric (or shifted
/// skew-symmetric) matrix.
///
/// Only the strictly lower triangle is stored. off_diags()[j] holds the lower
/// value A[i][col_ind()[j]]; the mirrored upper value is its negation. The
/// diagonal is kept separately and is either all zero or one constant alpha.
///
/// Invariants (checked by the constructor, StructuralError / DiagonalError):
///   row_ptr().size() == n + 1, row_ptr()[0] == 0, non-decreasing,
///   row_ptr()[n] == col_ind().size() == off_diags().size();
///   within row i the columns are strictly increasing and all < i;
///   diags().size() == n with every entry bit-equal to diags()[0].
class SssMatrix {
 public:
  SssMatrix() = default;
  SssMatrix(Index n, std::vector<std::size_t> row_ptr,
            std::vector<Index> col_ind, std::vector<double> off_diags,
            std::vector<double> diags);

  Index size() const noexcept { return n_; }
  std::size_t off_diagonal_count() const noexcept { return col_ind_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const Index> col_ind() const noexcept { return col_ind_; }
  std::span<const double> off_diags() const noexcept { return off_diags_; }
  std::span<const double> diags() const noexcept { return diags_; }

  // The shift alpha (0 for a strict skew matrix or n == 0).
  double shift() const noexcept { return diags_.empty() ? 0.0 : diags_[0]; }
  bool is_strict() const noexcept { return shift() == 0.0; }

  // Largest |value| over stored off-diagonals.
  double max_abs_off_diagonal() const noexcept;

  friend bool operator==(const SssMatrix&, const SssMatrix&) = default;

 private:
  Index n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Index> col_ind_;
  std::vector<double> off_diags_;
  std::vector<double> diags_;
};

enum class SkewMode { strict, shifted };

// Converts a (skew-)symmetric COO to SSS. The input is normalized first if it
// is not already. tolerance defaults to default_skew_tolerance(m).
//   StructuralError    pattern entry without its mirror (unless |v| <= tol)
//   SkewViolationError |A[i][j] + A[j][i]| > tol, reports the upper coordinate
//   DiagonalError      non-zero diagonal in strict mode, non-constant in shifted
SssMatrix coo_to_sss(const CooMatrix& m, SkewMode mode,
                     std::optional<double> tolerance = std::nullopt);

// Both triangles (upper = -lower) plus all n diagonal entries, normalized.
CooMatrix sss_to_coo(const SssMatrix& m);

}  // namespace pars3

#pragma once

#include <utility>
#include <vector>

#include "pars3/coo_matrix.hpp"

namespace pars3 {

enum class DiagonalClass { zero, constant, irregular };

struct SkewViolation {
  Index row = 0;  // upper coordinate, row < col
  Index col = 0;
  double magnitude = 0.0;  // |A[row][col] + A[col][row]|
};

struct SkewReport {
  double tolerance = 0.0;
  // Entries whose mirror coordinate is absent and whose own magnitude
  // exceeds the tolerance.
  std::vector<std::pair<Index, Index>> pattern_asymmetries;
  std::vector<SkewViolation> value_violations;
  DiagonalClass diagonal = DiagonalClass::zero;
  double alpha = 0.0;  // meaningful for DiagonalClass::constant

  bool valid() const noexcept {
    return pattern_asymmetries.empty() && value_violations.empty() &&
           diagonal != DiagonalClass::irregular;
  }
  bool strict() const noexcept {
    return valid() && diagonal == DiagonalClass::zero;
  }
};

// 1e-12 * max |off-diagonal value| of m.
double default_skew_tolerance(const CooMatrix& m);

// Never throws on bad content; every finding goes into the report. Missing
// diagonal entries count as zeros. An entry whose mirror is missing is
// accepted when its own magnitude is within tolerance (the mirror is then an
// implicit zero).
SkewReport validate_skew(const CooMatrix& m, double tolerance);

const char* to_string(DiagonalClass c) noexcept;

}  // namespace pars3

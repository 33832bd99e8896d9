#include "pars3/validate.hpp"

#include <algorithm>
#include <cmath>

#include "coo_lookup.hpp"

namespace pars3 {

double default_skew_tolerance(const CooMatrix& m) {
  double max_abs = 0.0;
  for (const Triplet& t : m.entries())
    if (t.row != t.col) max_abs = std::max(max_abs, std::abs(t.value));
  return 1e-12 * max_abs;
}

SkewReport validate_skew(const CooMatrix& input, double tolerance) {
  const CooMatrix m = coo_normalize(input);
  const detail::CooLookup lookup(m);
  const auto entries = m.entries();

  SkewReport report;
  report.tolerance = tolerance;

  std::size_t diag_present = 0;
  bool diag_all_zero = true;
  bool diag_all_equal = true;
  double first_diag = 0.0;

  for (const Triplet& t : entries) {
    if (t.row == t.col) {
      if (diag_present == 0) first_diag = t.value;
      diag_all_equal = diag_all_equal && t.value == first_diag;
      diag_all_zero = diag_all_zero && t.value == 0.0;
      ++diag_present;
      continue;
    }
    const auto mirror = lookup.find(t.col, t.row);
    if (!mirror) {
      if (!(std::abs(t.value) <= tolerance))
        report.pattern_asymmetries.emplace_back(t.row, t.col);
      continue;
    }
    // Each pair is judged once, from its lower member.
    if (t.row < t.col) continue;
    const double magnitude = std::abs(t.value + entries[*mirror].value);
    if (!(magnitude <= tolerance))
      report.value_violations.push_back({t.col, t.row, magnitude});
  }

  std::sort(report.value_violations.begin(), report.value_violations.end(),
            [](const SkewViolation& a, const SkewViolation& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });

  if (diag_all_zero) {
    report.diagonal = DiagonalClass::zero;
  } else if (diag_present == m.size() && diag_all_equal) {
    report.diagonal = DiagonalClass::constant;
    report.alpha = first_diag;
  } else {
    report.diagonal = DiagonalClass::irregular;
  }
  return report;
}

const char* to_string(DiagonalClass c) noexcept {
  switch (c) {
    case DiagonalClass::zero: return "zero";
    case DiagonalClass::constant: return "constant";
    case DiagonalClass::irregular: return "irregular";
  }
  return "unknown";
}

}  // namespace pars3

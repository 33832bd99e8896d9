#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "pars3/coo_matrix.hpp"

namespace pars3 {

enum class MmQualifier { general, symmetric, skew_symmetric };

// Reads `%%MatrixMarket matrix coordinate real <qualifier>`. Indices in the
// file are 1-based; the result is 0-based and normalized. `symmetric`
// mirrors each off-diagonal (j,i) = v, `skew-symmetric` mirrors (j,i) = -v.
//   ParseError       unknown banner/field/qualifier, malformed numbers
//   StructuralError  non-square size line, index out of range, wrong count
CooMatrix read_matrix_market(std::istream& in);
CooMatrix read_matrix_market_file(const std::filesystem::path& path);

// Writes 1-based coordinate text with 17 significant digits per value.
// `skew-symmetric` requires the matrix to pass validate_skew with the default
// tolerance and a zero diagonal, and writes only the strictly lower triangle.
// `symmetric` output is not supported (ArgumentError).
void write_matrix_market(std::ostream& out, const CooMatrix& m,
                         MmQualifier qualifier);
std::string write_matrix_market(const CooMatrix& m, MmQualifier qualifier);
void write_matrix_market_file(const std::filesystem::path& path,
                              const CooMatrix& m, MmQualifier qualifier);

const char* to_string(MmQualifier q) noexcept;

// 17 significant digits; parses back to the identical double.
std::string format_real(double v);

}  // namespace pars3

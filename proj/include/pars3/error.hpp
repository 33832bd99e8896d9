#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pars3 {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape or pattern problem: out-of-bounds entry, non-square size line,
// asymmetric pattern, entry-count mismatch, inconsistent split arrays.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// |A[i][j] + A[j][i]| above the skew tolerance.
class SkewViolationError : public Error {
 public:
  SkewViolationError(const std::string& what, std::size_t row, std::size_t col)
      : Error(what), row_(row), col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

// Diagonal neither all zero (strict) nor one constant (shifted).
class DiagonalError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. line() is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Parameter out of range or dimension mismatch between arguments.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace pars3

#include "pars3/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "pars3/error.hpp"
#include "pars3/validate.hpp"

namespace pars3 {

namespace {

std::string lower_case(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line_no, const char* what) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  // from_chars rejects a leading '+', which some writers emit.
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError(std::string("malformed ") + what + " '" +
                         std::string(token) + "'",
                     line_no);
  return value;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) {
    return std::isspace(c);
  });
}

}  // namespace

const char* to_string(MmQualifier q) noexcept {
  switch (q) {
    case MmQualifier::general: return "general";
    case MmQualifier::symmetric: return "symmetric";
    case MmQualifier::skew_symmetric: return "skew-symmetric";
  }
  return "unknown";
}

std::string format_real(double v) {
  char buf[64];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

CooMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw ParseError("empty input", 1);
  ++line_no;
  const auto banner = split_ws(line);
  if (banner.size() != 5 || lower_case(banner[0]) != "%%matrixmarket")
    throw ParseError("missing %%MatrixMarket banner", line_no);
  if (lower_case(banner[1]) != "matrix")
    throw ParseError("unsupported object '" + std::string(banner[1]) + "'",
                     line_no);
  if (lower_case(banner[2]) != "coordinate")
    throw ParseError("unsupported format '" + std::string(banner[2]) + "'",
                     line_no);
  if (lower_case(banner[3]) != "real")
    throw ParseError("unsupported field '" + std::string(banner[3]) + "'",
                     line_no);
  const std::string qual = lower_case(banner[4]);
  MmQualifier qualifier;
  if (qual == "general") {
    qualifier = MmQualifier::general;
  } else if (qual == "symmetric") {
    qualifier = MmQualifier::symmetric;
  } else if (qual == "skew-symmetric") {
    qualifier = MmQualifier::skew_symmetric;
  } else {
    throw ParseError("unsupported qualifier '" + std::string(banner[4]) + "'",
                     line_no);
  }

  // Comments and blank lines may precede the size line.
  bool have_size = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    if (is_blank(line)) continue;
    have_size = true;
    break;
  }
  if (!have_size) throw ParseError("missing size line", line_no + 1);

  const auto size_tokens = split_ws(line);
  if (size_tokens.size() != 3)
    throw ParseError("size line must be 'rows cols nnz'", line_no);
  const auto rows = parse_number<std::uint64_t>(size_tokens[0], line_no, "row count");
  const auto cols = parse_number<std::uint64_t>(size_tokens[1], line_no, "column count");
  const auto count = parse_number<std::uint64_t>(size_tokens[2], line_no, "entry count");
  if (rows != cols)
    throw StructuralError("line " + std::to_string(line_no) +
                          ": matrix is not square (" + std::to_string(rows) +
                          " x " + std::to_string(cols) + ")");
  if (rows > std::numeric_limits<Index>::max())
    throw StructuralError("matrix dimension too large");
  const Index n = static_cast<Index>(rows);

  std::vector<Triplet> entries;
  entries.reserve(qualifier == MmQualifier::general ? count : 2 * count);
  std::uint64_t read = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    if (is_blank(line)) continue;
    const auto tok = split_ws(line);
    if (tok.size() != 3)
      throw ParseError("entry line must be 'i j value'", line_no);
    const auto i = parse_number<std::uint64_t>(tok[0], line_no, "row index");
    const auto j = parse_number<std::uint64_t>(tok[1], line_no, "column index");
    const double v = parse_number<double>(tok[2], line_no, "value");
    if (i < 1 || j < 1 || i > n || j > n)
      throw StructuralError("line " + std::to_string(line_no) + ": index (" +
                            std::to_string(i) + ", " + std::to_string(j) +
                            ") outside 1.." + std::to_string(n));
    if (++read > count)
      throw StructuralError("line " + std::to_string(line_no) +
                            ": more entries than the size line declares (" +
                            std::to_string(count) + ")");
    const auto r = static_cast<Index>(i - 1);
    const auto c = static_cast<Index>(j - 1);
    entries.push_back({r, c, v});
    if (r == c) {
      if (qualifier == MmQualifier::skew_symmetric)
        throw StructuralError("line " + std::to_string(line_no) +
                              ": skew-symmetric file stores a diagonal entry");
      continue;
    }
    if (qualifier == MmQualifier::symmetric) entries.push_back({c, r, v});
    if (qualifier == MmQualifier::skew_symmetric) entries.push_back({c, r, -v});
  }
  if (read != count)
    throw StructuralError("entry count mismatch: size line declares " +
                          std::to_string(count) + ", body has " +
                          std::to_string(read));
  return coo_normalize(CooMatrix(n, std::move(entries)));
}

CooMatrix read_matrix_market_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const CooMatrix& input,
                         MmQualifier qualifier) {
  if (qualifier == MmQualifier::symmetric)
    throw ArgumentError("symmetric Matrix Market output is not supported");
  const CooMatrix m = coo_normalize(input);

  std::vector<Triplet> body;
  if (qualifier == MmQualifier::skew_symmetric) {
    const SkewReport report = validate_skew(m, default_skew_tolerance(m));
    if (!report.pattern_asymmetries.empty())
      throw StructuralError("cannot write skew-symmetric: asymmetric pattern");
    if (!report.value_violations.empty()) {
      const SkewViolation& v = report.value_violations.front();
      throw SkewViolationError("cannot write skew-symmetric: violation at (" +
                                   std::to_string(v.row) + ", " +
                                   std::to_string(v.col) + ")",
                               v.row, v.col);
    }
    if (report.diagonal != DiagonalClass::zero)
      throw DiagonalError("cannot write skew-symmetric: non-zero diagonal");
    for (const Triplet& t : m.entries())
      if (t.row > t.col) body.push_back(t);
  } else {
    body.assign(m.entries().begin(), m.entries().end());
  }

  out << "%%MatrixMarket matrix coordinate real " << to_string(qualifier)
      << '\n';
  out << m.size() << ' ' << m.size() << ' ' << body.size() << '\n';
  for (const Triplet& t : body)
    out << (t.row + 1) << ' ' << (t.col + 1) << ' ' << format_real(t.value)
        << '\n';
}

std::string write_matrix_market(const CooMatrix& m, MmQualifier qualifier) {
  std::ostringstream os;
  write_matrix_market(os, m, qualifier);
  return os.str();
}

void write_matrix_market_file(const std::filesystem::path& path,
                              const CooMatrix& m, MmQualifier qualifier) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_matrix_market(out, m, qualifier);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace pars3

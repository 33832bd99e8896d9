#include "pars3/coo_matrix.hpp"

#include <algorithm>
#include <string>

#include "pars3/error.hpp"

namespace pars3 {

namespace {

bool coord_less(const Triplet& a, const Triplet& b) noexcept {
  return a.row != b.row ? a.row < b.row : a.col < b.col;
}

}  // namespace

CooMatrix::CooMatrix(Index n, std::vector<Triplet> entries)
    : n_(n), entries_(std::move(entries)) {
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const Triplet& t = entries_[k];
    if (t.row >= n_ || t.col >= n_) {
      throw StructuralError("entry " + std::to_string(k) + " at (" +
                            std::to_string(t.row) + ", " +
                            std::to_string(t.col) +
                            ") is outside a matrix of dimension " +
                            std::to_string(n_));
    }
  }
}

bool CooMatrix::is_normalized() const noexcept {
  return std::adjacent_find(entries_.begin(), entries_.end(),
                            [](const Triplet& a, const Triplet& b) {
                              return !coord_less(a, b);
                            }) == entries_.end();
}

CooMatrix coo_normalize(CooMatrix m) {
  if (m.is_normalized()) return m;

  std::vector<Triplet> entries(m.entries().begin(), m.entries().end());
  std::stable_sort(entries.begin(), entries.end(), coord_less);

  std::vector<Triplet> merged;
  merged.reserve(entries.size());
  for (const Triplet& t : entries) {
    if (!merged.empty() && merged.back().row == t.row &&
        merged.back().col == t.col) {
      merged.back().value += t.value;
    } else {
      merged.push_back(t);
    }
  }
  return CooMatrix(m.size(), std::move(merged));
}

}  // namespace pars3

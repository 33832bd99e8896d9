#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "pars3/coo_matrix.hpp"

namespace pars3::detail {

// Row offsets over a normalized COO for O(log deg) coordinate lookup.
class CooLookup {
 public:
  explicit CooLookup(const CooMatrix& m) : entries_(m.entries()) {
    row_start_.assign(static_cast<std::size_t>(m.size()) + 1, 0);
    for (const Triplet& t : entries_) ++row_start_[t.row + 1];
    for (std::size_t i = 1; i < row_start_.size(); ++i)
      row_start_[i] += row_start_[i - 1];
  }

  std::optional<std::size_t> find(Index row, Index col) const {
    const auto first = entries_.begin() + row_start_[row];
    const auto last = entries_.begin() + row_start_[row + 1];
    const auto it = std::lower_bound(
        first, last, col, [](const Triplet& t, Index c) { return t.col < c; });
    if (it == last || it->col != col) return std::nullopt;
    return static_cast<std::size_t>(it - entries_.begin());
  }

 private:
  std::span<const Triplet> entries_;
  std::vector<std::size_t> row_start_;
};

}  // namespace pars3::detail

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "pars3/coo_matrix.hpp"
#include "pars3/sss_matrix.hpp"

namespace pars3 {

// Bijection on {0..n-1}. forward maps old index -> new index, inverse maps
// new -> old.
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(Index n);
  // Throws ArgumentError if forward is not a bijection.
  static Permutation from_forward(std::vector<Index> forward);
  // order[k] is the old index placed at new position k.
  static Permutation from_order(std::vector<Index> order);

  Index size() const noexcept { return static_cast<Index>(forward_.size()); }
  std::span<const Index> forward() const noexcept { return forward_; }
  std::span<const Index> inverse() const noexcept { return inverse_; }

  Permutation inverted() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  Permutation(std::vector<Index> forward, std::vector<Index> inverse)
      : forward_(std::move(forward)), inverse_(std::move(inverse)) {}

  std::vector<Index> forward_;
  std::vector<Index> inverse_;
};

// Undirected graph of the off-diagonal pattern: symmetric, loop-free,
// neighbour lists sorted ascending.
class AdjacencyPattern {
 public:
  AdjacencyPattern() = default;
  // Edges are symmetrized, deduplicated and self-loops dropped.
  static AdjacencyPattern from_edges(Index n,
                                     std::span<const std::pair<Index, Index>> edges);

  Index size() const noexcept { return n_; }
  std::span<const Index> neighbors(Index v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  Index degree(Index v) const noexcept {
    return static_cast<Index>(offsets_[v + 1] - offsets_[v]);
  }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

 private:
  Index n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Index> adjacency_;
};

AdjacencyPattern pattern_from_coo(const CooMatrix& m);

// max |i - j| over structural off-diagonals; 0 when there are none.
Index compute_bandwidth(const CooMatrix& m);
Index compute_bandwidth(const SssMatrix& m);
Index compute_bandwidth(const AdjacencyPattern& g);

/// Reverse Cuthill-McKee ordering.
///
/// Components are handled in ascending order of their smallest vertex. Each
/// starts from a George-Liu pseudo-peripheral vertex, is labelled breadth
/// first with unvisited neighbours taken by ascending degree (ties by
/// ascending index), and has its labels reversed in place, so components keep
/// their relative order in the result. Runs in O(|V| + |E|) apart from the
/// neighbour sorts.
Permutation rcm_order(const AdjacencyPattern& g);

// (i, j, v) -> (forward[i], forward[j], v), normalized.
CooMatrix apply_permutation(const CooMatrix& m, const Permutation& p);

// y[forward[i]] = x[i]
DenseVector permute_vector(std::span<const double> x, const Permutation& p);

// Uniformly random permutation (Fisher-Yates on Rng).
Permutation random_permutation(Index n, std::uint64_t seed);

// Text format: first line n, then n lines "old new" (0-based).
void write_permutation(std::ostream& out, const Permutation& p);
Permutation read_permutation(std::istream& in);

}  // namespace pars3

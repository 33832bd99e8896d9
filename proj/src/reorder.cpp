#include "pars3/reorder.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "pars3/error.hpp"
#include "pars3/generate.hpp"

namespace pars3 {

// ---------------------------------------------------------------------------
// Permutation

Permutation Permutation::identity(Index n) {
  std::vector<Index> f(n);
  for (Index i = 0; i < n; ++i) f[i] = i;
  std::vector<Index> inv = f;
  return Permutation(std::move(f), std::move(inv));
}

Permutation Permutation::from_forward(std::vector<Index> forward) {
  const auto n = static_cast<Index>(forward.size());
  constexpr Index unset = std::numeric_limits<Index>::max();
  std::vector<Index> inverse(n, unset);
  for (Index old = 0; old < n; ++old) {
    const Index nu = forward[old];
    if (nu >= n || inverse[nu] != unset)
      throw ArgumentError("not a permutation: index " + std::to_string(old) +
                          " maps to " + std::to_string(nu));
    inverse[nu] = old;
  }
  return Permutation(std::move(forward), std::move(inverse));
}

Permutation Permutation::from_order(std::vector<Index> order) {
  return from_forward(Permutation::from_forward(std::move(order)).inverse_);
}

Permutation Permutation::inverted() const { return Permutation(inverse_, forward_); }

// ---------------------------------------------------------------------------
// Adjacency

AdjacencyPattern AdjacencyPattern::from_edges(
    Index n, std::span<const std::pair<Index, Index>> edges) {
  AdjacencyPattern g;
  g.n_ = n;
  std::vector<std::size_t> count(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) throw ArgumentError("edge endpoint out of range");
    if (a == b) continue;
    ++count[a + 1];
    ++count[b + 1];
  }
  for (Index v = 0; v < n; ++v) count[v + 1] += count[v];

  std::vector<Index> raw(count[n]);
  std::vector<std::size_t> cursor(count.begin(), count.end() - 1);
  for (const auto& [a, b] : edges) {
    if (a == b) continue;
    raw[cursor[a]++] = b;
    raw[cursor[b]++] = a;
  }

  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  g.adjacency_.reserve(raw.size());
  for (Index v = 0; v < n; ++v) {
    auto first = raw.begin() + static_cast<std::ptrdiff_t>(count[v]);
    auto last = raw.begin() + static_cast<std::ptrdiff_t>(count[v + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    g.adjacency_.insert(g.adjacency_.end(), first, last);
    g.offsets_[v + 1] = g.adjacency_.size();
  }
  return g;
}

AdjacencyPattern pattern_from_coo(const CooMatrix& m) {
  std::vector<std::pair<Index, Index>> edges;
  edges.reserve(m.nnz());
  for (const Triplet& t : m.entries())
    if (t.row != t.col) edges.emplace_back(t.row, t.col);
  return AdjacencyPattern::from_edges(m.size(), edges);
}

Index compute_bandwidth(const CooMatrix& m) {
  Index bw = 0;
  for (const Triplet& t : m.entries())
    bw = std::max(bw, t.row > t.col ? t.row - t.col : t.col - t.row);
  return bw;
}

Index compute_bandwidth(const SssMatrix& m) {
  Index bw = 0;
  const auto row_ptr = m.row_ptr();
  const auto col_ind = m.col_ind();
  for (Index i = 0; i < m.size(); ++i) {
    // Columns ascend, so the first stored one is the farthest.
    if (row_ptr[i + 1] > row_ptr[i]) bw = std::max(bw, i - col_ind[row_ptr[i]]);
  }
  return bw;
}

Index compute_bandwidth(const AdjacencyPattern& g) {
  Index bw = 0;
  for (Index v = 0; v < g.size(); ++v) {
    const auto nb = g.neighbors(v);
    if (!nb.empty()) bw = std::max({bw, nb.back() > v ? nb.back() - v : 0,
                                    nb.front() < v ? v - nb.front() : 0});
  }
  return bw;
}

// ---------------------------------------------------------------------------
// RCM

namespace {

constexpr Index kUnreached = std::numeric_limits<Index>::max();

// Rooted level structure. level[] is reset lazily through the queue so a
// search costs O(component), not O(n).
class LevelStructure {
 public:
  explicit LevelStructure(Index n) : level_(n, kUnreached) { queue_.reserve(n); }

  // Returns the eccentricity of root; last_level() is valid afterwards.
  Index build(const AdjacencyPattern& g, Index root) {
    clear();
    level_[root] = 0;
    queue_.push_back(root);
    last_begin_ = 0;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const Index v = queue_[head];
      if (level_[v] != level_[queue_[last_begin_]]) last_begin_ = head;
      for (Index w : g.neighbors(v)) {
        if (level_[w] == kUnreached) {
          level_[w] = level_[v] + 1;
          queue_.push_back(w);
        }
      }
    }
    return level_[queue_.back()];
  }

  std::span<const Index> last_level() const {
    return std::span<const Index>(queue_).subspan(last_begin_);
  }

  void clear() {
    for (Index v : queue_) level_[v] = kUnreached;
    queue_.clear();
  }

 private:
  std::vector<Index> level_;
  std::vector<Index> queue_;
  std::size_t last_begin_ = 0;
};

bool lighter(const AdjacencyPattern& g, Index a, Index b) {
  const Index da = g.degree(a);
  const Index db = g.degree(b);
  return da != db ? da < db : a < b;
}

// George-Liu: hop to a minimum-degree vertex of the deepest level while the
// eccentricity keeps growing.
Index pseudo_peripheral(const AdjacencyPattern& g, Index seed,
                        LevelStructure& ls) {
  Index root = seed;
  Index ecc = ls.build(g, root);
  for (;;) {
    const auto last = ls.last_level();
    const Index candidate = *std::min_element(
        last.begin(), last.end(),
        [&](Index a, Index b) { return lighter(g, a, b); });
    const Index candidate_ecc = ls.build(g, candidate);
    root = candidate;
    if (candidate_ecc <= ecc) break;
    ecc = candidate_ecc;
  }
  ls.clear();
  return root;
}

}  // namespace

Permutation rcm_order(const AdjacencyPattern& g) {
  const Index n = g.size();
  std::vector<Index> order;
  order.reserve(n);
  std::vector<char> labelled(n, 0);
  LevelStructure ls(n);
  std::vector<Index> fresh;

  for (Index seed = 0; seed < n; ++seed) {
    if (labelled[seed]) continue;
    const std::size_t component_begin = order.size();
    const Index start = pseudo_peripheral(g, seed, ls);

    labelled[start] = 1;
    order.push_back(start);
    for (std::size_t head = component_begin; head < order.size(); ++head) {
      fresh.clear();
      for (Index w : g.neighbors(order[head]))
        if (!labelled[w]) fresh.push_back(w);
      std::sort(fresh.begin(), fresh.end(),
                [&](Index a, Index b) { return lighter(g, a, b); });
      for (Index w : fresh) {
        labelled[w] = 1;
        order.push_back(w);
      }
    }
    std::reverse(order.begin() + static_cast<std::ptrdiff_t>(component_begin),
                 order.end());
  }
  return Permutation::from_order(std::move(order));
}

CooMatrix apply_permutation(const CooMatrix& m, const Permutation& p) {
  if (p.size() != m.size())
    throw ArgumentError("permutation of size " + std::to_string(p.size()) +
                        " applied to matrix of dimension " +
                        std::to_string(m.size()));
  const auto fwd = p.forward();
  std::vector<Triplet> out;
  out.reserve(m.nnz());
  for (const Triplet& t : m.entries())
    out.push_back({fwd[t.row], fwd[t.col], t.value});
  return coo_normalize(CooMatrix(m.size(), std::move(out)));
}

DenseVector permute_vector(std::span<const double> x, const Permutation& p) {
  if (x.size() != p.size()) throw ArgumentError("vector/permutation size mismatch");
  DenseVector y(x.size());
  const auto fwd = p.forward();
  for (std::size_t i = 0; i < x.size(); ++i) y[fwd[i]] = x[i];
  return y;
}

Permutation random_permutation(Index n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Index> f(n);
  for (Index i = 0; i < n; ++i) f[i] = i;
  for (Index i = n; i > 1; --i) std::swap(f[i - 1], f[rng.below(i)]);
  return Permutation::from_forward(std::move(f));
}

void write_permutation(std::ostream& out, const Permutation& p) {
  out << p.size() << '\n';
  const auto fwd = p.forward();
  for (Index i = 0; i < p.size(); ++i) out << i << ' ' << fwd[i] << '\n';
}

Permutation read_permutation(std::istream& in) {
  std::uint64_t n = 0;
  if (!(in >> n)) throw ParseError("missing permutation size", 1);
  if (n > std::numeric_limits<Index>::max())
    throw ParseError("permutation size too large", 1);
  constexpr Index unset = std::numeric_limits<Index>::max();
  std::vector<Index> forward(n, unset);
  for (std::uint64_t k = 0; k < n; ++k) {
    std::uint64_t old = 0, nu = 0;
    if (!(in >> old >> nu))
      throw ParseError("expected 'old new' pair", static_cast<std::size_t>(k + 2));
    if (old >= n || nu >= n || forward[old] != unset)
      throw ParseError("invalid or repeated pair " + std::to_string(old) + " " +
                           std::to_string(nu),
                       static_cast<std::size_t>(k + 2));
    forward[old] = static_cast<Index>(nu);
  }
  try {
    return Permutation::from_forward(std::move(forward));
  } catch (const ArgumentError& e) {
    throw ParseError(e.what(), 0);  // a new index used twice
  }
}

}  // namespace pars3

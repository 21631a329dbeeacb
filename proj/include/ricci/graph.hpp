#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ricci {

using Index = std::int32_t;

/// Immutable simple undirected graph: sorted CSR adjacency plus a canonical
/// edge index (lexicographic over (min,max) endpoint pairs). All weight
/// vectors in this library are aligned to that index.
class Graph {
 public:
  /// Builds from an arbitrary edge list. Duplicates are merged; self-loops
  /// and out-of-range endpoints are rejected naming the offending pair.
  static Graph build(Index n_vertices, const std::vector<std::pair<Index, Index>>& edges);

  Index num_vertices() const { return n_; }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }

  std::span<const Index> neighbors(Index v) const {
    check_vertex(v);
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  /// Canonical edge indices aligned with neighbors(v).
  std::span<const Index> incident_edges(Index v) const {
    check_vertex(v);
    return {incident_.data() + offsets_[v], incident_.data() + offsets_[v + 1]};
  }
  Index degree(Index v) const {
    check_vertex(v);
    return offsets_[v + 1] - offsets_[v];
  }

  bool has_edge(Index u, Index v) const { return edge_index(u, v).has_value(); }

  /// O(1) adjacency test (no bounds checks beyond construction guarantees).
  bool adjacent(Index u, Index v) const {
    return (adj_bits_[static_cast<std::size_t>(u) * words_per_row_ +
                      static_cast<std::size_t>(v) / 64] >>
            (v % 64)) &
           1ull;
  }

  /// Canonical index of the unordered edge {u,v}, or nullopt if absent.
  std::optional<Index> edge_index(Index u, Index v) const;

  /// Endpoints (u,v) with u < v of canonical edge e.
  std::pair<Index, Index> edge_endpoints(Index e) const {
    if (e < 0 || e >= num_edges()) throw std::out_of_range("edge index out of range");
    return edges_[static_cast<std::size_t>(e)];
  }
  const std::vector<std::pair<Index, Index>>& edges() const { return edges_; }

  /// True iff Γ(u) ∩ Γ(v) is nonempty (bitset intersection).
  bool have_common_neighbor(Index u, Index v) const;

  /// Exact shortest-path distance if ≤ cap, nullopt ("beyond cap") otherwise.
  /// Truncated breadth-first search from u.
  std::optional<int> truncated_distance(Index u, Index v, int cap) const;

  void check_vertex(Index v) const {
    if (v < 0 || v >= n_)
      throw std::out_of_range("vertex " + std::to_string(v) + " out of range [0," +
                              std::to_string(n_) + ")");
  }

 private:
  Graph() = default;

  Index n_ = 0;
  std::vector<Index> offsets_;   // size n_+1
  std::vector<Index> adj_;       // sorted neighbor lists
  std::vector<Index> incident_;  // canonical edge index per adjacency slot
  std::vector<std::pair<Index, Index>> edges_;
  std::unordered_map<std::uint64_t, Index> edge_lookup_;
  std::vector<std::uint64_t> adj_bits_;  // n_ rows of words_per_row_ words
  std::size_t words_per_row_ = 0;
};

/// Two-block vertex labelling, values in {1,2}.
struct Labels {
  std::vector<std::uint8_t> block;

  Index size() const { return static_cast<Index>(block.size()); }
  int of(Index v) const { return block[static_cast<std::size_t>(v)]; }
  bool same_block(Index u, Index v) const { return of(u) == of(v); }
  Index count(int b) const;

  static Labels balanced(Index n_per_block);
};

/// Local pair combinatorics around an (ordered) pair (x,y): degrees,
/// co-degree, exclusive neighborhoods, and (with labels) the type splits
/// and imbalances used by the good-event diagnostics.
struct PairStats {
  Index deg_x = 0, deg_y = 0;
  Index codeg = 0;                       // |Γ(x) ∩ Γ(y)|
  std::vector<Index> exclusive_x;        // U_x = Γ(x) \ (Γ(y) ∪ {y})
  std::vector<Index> exclusive_y;        // U_y = Γ(y) \ (Γ(x) ∪ {x})
  bool has_type_split = false;
  std::vector<Index> u_in, u_out;        // U_x split by x's home block
  std::vector<Index> v_in, v_out;        // U_y split by y's home block
  Index imbalance_in = 0, imbalance_out = 0, imbalance_total = 0;
};

PairStats pair_stats(const Graph& g, Index x, Index y, const Labels* labels = nullptr);

struct MatchingResult {
  bool saturating = false;
  std::vector<std::pair<Index, Index>> matching;  // (left vertex, right vertex)
};

/// Maximum bipartite matching (augmenting paths) between two disjoint vertex
/// sets, edges taken from g restricted to left×right. saturating is true iff
/// the matching covers the smaller side (Hall's condition holds for it).
MatchingResult hall_matching_check(const Graph& g, std::span<const Index> left,
                                   std::span<const Index> right);

}  // namespace ricci

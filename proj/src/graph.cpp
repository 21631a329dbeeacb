#include "ricci/graph.hpp"

#include <algorithm>
#include <queue>

namespace ricci {

namespace {
inline std::uint64_t pair_key(Index u, Index v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}
}  // namespace

Graph Graph::build(Index n_vertices, const std::vector<std::pair<Index, Index>>& edges) {
  if (n_vertices < 0) throw std::invalid_argument("n_vertices must be nonnegative");
  Graph g;
  g.n_ = n_vertices;

  std::vector<std::pair<Index, Index>> canon;
  canon.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= n_vertices || v < 0 || v >= n_vertices)
      throw std::invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                  ") has out-of-range endpoint");
    if (u == v)
      throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    canon.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(canon.begin(), canon.end());
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
  g.edges_ = std::move(canon);

  g.edge_lookup_.reserve(g.edges_.size() * 2);
  for (std::size_t e = 0; e < g.edges_.size(); ++e)
    g.edge_lookup_.emplace(pair_key(g.edges_[e].first, g.edges_[e].second),
                           static_cast<Index>(e));

  std::vector<Index> deg(static_cast<std::size_t>(n_vertices), 0);
  for (const auto& [u, v] : g.edges_) {
    ++deg[static_cast<std::size_t>(u)];
    ++deg[static_cast<std::size_t>(v)];
  }
  g.offsets_.assign(static_cast<std::size_t>(n_vertices) + 1, 0);
  for (Index v = 0; v < n_vertices; ++v)
    g.offsets_[static_cast<std::size_t>(v) + 1] =
        g.offsets_[static_cast<std::size_t>(v)] + deg[static_cast<std::size_t>(v)];
  g.adj_.resize(static_cast<std::size_t>(g.offsets_.back()));
  std::vector<Index> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : g.edges_) {
    g.adj_[static_cast<std::size_t>(fill[static_cast<std::size_t>(u)]++)] = v;
    g.adj_[static_cast<std::size_t>(fill[static_cast<std::size_t>(v)]++)] = u;
  }
  for (Index v = 0; v < n_vertices; ++v)
    std::sort(g.adj_.begin() + g.offsets_[static_cast<std::size_t>(v)],
              g.adj_.begin() + g.offsets_[static_cast<std::size_t>(v) + 1]);
  g.incident_.resize(g.adj_.size());
  for (Index v = 0; v < n_vertices; ++v)
    for (Index s = g.offsets_[static_cast<std::size_t>(v)];
         s < g.offsets_[static_cast<std::size_t>(v) + 1]; ++s)
      g.incident_[static_cast<std::size_t>(s)] =
          g.edge_lookup_.at(pair_key(v, g.adj_[static_cast<std::size_t>(s)]));

  g.words_per_row_ = (static_cast<std::size_t>(n_vertices) + 63) / 64;
  g.adj_bits_.assign(g.words_per_row_ * static_cast<std::size_t>(n_vertices), 0);
  for (const auto& [u, v] : g.edges_) {
    g.adj_bits_[static_cast<std::size_t>(u) * g.words_per_row_ +
                static_cast<std::size_t>(v) / 64] |= 1ull << (v % 64);
    g.adj_bits_[static_cast<std::size_t>(v) * g.words_per_row_ +
                static_cast<std::size_t>(u) / 64] |= 1ull << (u % 64);
  }
  return g;
}

std::optional<Index> Graph::edge_index(Index u, Index v) const {
  check_vertex(u);
  check_vertex(v);
  if (u == v) return std::nullopt;
  auto it = edge_lookup_.find(pair_key(u, v));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

bool Graph::have_common_neighbor(Index u, Index v) const {
  const std::uint64_t* ru = adj_bits_.data() + static_cast<std::size_t>(u) * words_per_row_;
  const std::uint64_t* rv = adj_bits_.data() + static_cast<std::size_t>(v) * words_per_row_;
  for (std::size_t w = 0; w < words_per_row_; ++w)
    if (ru[w] & rv[w]) return true;
  return false;
}

std::optional<int> Graph::truncated_distance(Index u, Index v, int cap) const {
  check_vertex(u);
  check_vertex(v);
  if (cap < 1) throw std::invalid_argument("distance cap must be >= 1");
  if (u == v) return 0;

  // BFS from u, truncated at depth cap.
  std::vector<int> dist(static_cast<std::size_t>(n_), -1);
  std::vector<Index> frontier{u}, next;
  dist[static_cast<std::size_t>(u)] = 0;
  for (int d = 0; d < cap && !frontier.empty(); ++d) {
    next.clear();
    for (Index a : frontier) {
      for (Index b : neighbors(a)) {
        if (dist[static_cast<std::size_t>(b)] >= 0) continue;
        dist[static_cast<std::size_t>(b)] = d + 1;
        if (b == v) return d + 1;
        next.push_back(b);
      }
    }
    frontier.swap(next);
  }
  return std::nullopt;
}

Index Labels::count(int b) const {
  Index c = 0;
  for (auto x : block)
    if (x == b) ++c;
  return c;
}

Labels Labels::balanced(Index n_per_block) {
  Labels l;
  l.block.assign(static_cast<std::size_t>(2 * n_per_block), 1);
  for (Index v = n_per_block; v < 2 * n_per_block; ++v)
    l.block[static_cast<std::size_t>(v)] = 2;
  return l;
}

PairStats pair_stats(const Graph& g, Index x, Index y, const Labels* labels) {
  g.check_vertex(x);
  g.check_vertex(y);
  if (x == y) throw std::invalid_argument("pair_stats requires x != y");

  PairStats s;
  s.deg_x = g.degree(x);
  s.deg_y = g.degree(y);

  auto nx = g.neighbors(x);
  auto ny = g.neighbors(y);
  // Sorted-merge split of Γ(x) into common and exclusive parts.
  std::size_t i = 0, j = 0;
  while (i < nx.size() && j < ny.size()) {
    if (nx[i] == ny[j]) {
      ++s.codeg;
      ++i;
      ++j;
    } else if (nx[i] < ny[j]) {
      if (nx[i] != y) s.exclusive_x.push_back(nx[i]);
      ++i;
    } else {
      if (ny[j] != x) s.exclusive_y.push_back(ny[j]);
      ++j;
    }
  }
  for (; i < nx.size(); ++i)
    if (nx[i] != y) s.exclusive_x.push_back(nx[i]);
  for (; j < ny.size(); ++j)
    if (ny[j] != x) s.exclusive_y.push_back(ny[j]);

  if (labels != nullptr) {
    if (labels->size() != g.num_vertices())
      throw std::invalid_argument("labels size does not match graph");
    s.has_type_split = true;
    const int hx = labels->of(x), hy = labels->of(y);
    for (Index u : s.exclusive_x)
      (labels->of(u) == hx ? s.u_in : s.u_out).push_back(u);
    for (Index v : s.exclusive_y)
      (labels->of(v) == hy ? s.v_in : s.v_out).push_back(v);
    s.imbalance_in = static_cast<Index>(
        std::abs(static_cast<long>(s.u_in.size()) - static_cast<long>(s.v_in.size())));
    s.imbalance_out = static_cast<Index>(
        std::abs(static_cast<long>(s.u_out.size()) - static_cast<long>(s.v_out.size())));
    s.imbalance_total = s.imbalance_in + s.imbalance_out;
  }
  return s;
}

MatchingResult hall_matching_check(const Graph& g, std::span<const Index> left,
                                   std::span<const Index> right) {
  std::vector<Index> lsorted(left.begin(), left.end());
  std::vector<Index> rsorted(right.begin(), right.end());
  std::sort(lsorted.begin(), lsorted.end());
  std::sort(rsorted.begin(), rsorted.end());
  {
    std::vector<Index> overlap;
    std::set_intersection(lsorted.begin(), lsorted.end(), rsorted.begin(), rsorted.end(),
                          std::back_inserter(overlap));
    if (!overlap.empty())
      throw std::invalid_argument("hall_matching_check: sides overlap at vertex " +
                                  std::to_string(overlap.front()));
  }
  for (Index v : left) g.check_vertex(v);
  for (Index v : right) g.check_vertex(v);

  // Kuhn's augmenting-path maximum matching on the induced bipartite graph.
  const Index nl = static_cast<Index>(left.size());
  const Index nr = static_cast<Index>(right.size());
  std::unordered_map<Index, Index> rpos;
  rpos.reserve(static_cast<std::size_t>(nr) * 2);
  for (Index j = 0; j < nr; ++j) rpos.emplace(right[static_cast<std::size_t>(j)], j);

  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(nl));
  for (Index i = 0; i < nl; ++i)
    for (Index u : g.neighbors(left[static_cast<std::size_t>(i)]))
      if (auto it = rpos.find(u); it != rpos.end())
        adj[static_cast<std::size_t>(i)].push_back(it->second);

  std::vector<Index> match_r(static_cast<std::size_t>(nr), -1);
  std::vector<Index> match_l(static_cast<std::size_t>(nl), -1);
  std::vector<char> seen(static_cast<std::size_t>(nr));

  auto try_augment = [&](auto&& self, Index i) -> bool {
    for (Index j : adj[static_cast<std::size_t>(i)]) {
      if (seen[static_cast<std::size_t>(j)]) continue;
      seen[static_cast<std::size_t>(j)] = 1;
      if (match_r[static_cast<std::size_t>(j)] < 0 ||
          self(self, match_r[static_cast<std::size_t>(j)])) {
        match_r[static_cast<std::size_t>(j)] = i;
        match_l[static_cast<std::size_t>(i)] = j;
        return true;
      }
    }
    return false;
  };

  Index size = 0;
  for (Index i = 0; i < nl; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    if (try_augment(try_augment, i)) ++size;
  }

  MatchingResult res;
  res.saturating = (size == std::min(nl, nr));
  for (Index i = 0; i < nl; ++i)
    if (match_l[static_cast<std::size_t>(i)] >= 0)
      res.matching.emplace_back(
          left[static_cast<std::size_t>(i)],
          right[static_cast<std::size_t>(match_l[static_cast<std::size_t>(i)])]);
  return res;
}

}  // namespace ricci

#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ricci::testing {

namespace {

constexpr double kPivotTol = 1e-11;

/// Minimal dense tableau simplex (min c'x, Ax = b, x >= 0) with Bland's
/// rule; b must be nonnegative. Returns the optimal objective.
class TableauSimplex {
 public:
  TableauSimplex(std::vector<std::vector<double>> a, std::vector<double> b,
                 std::vector<double> c)
      : m_(a.size()), n_(c.size()), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {}

  double solve() {
    // Phase 1: artificial basis, minimize artificial mass.
    basis_.resize(m_);
    tab_.assign(m_, std::vector<double>(n_ + m_ + 1, 0.0));
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t j = 0; j < n_; ++j) tab_[r][j] = a_[r][j];
      tab_[r][n_ + r] = 1.0;
      tab_[r].back() = b_[r];
      basis_[r] = n_ + r;
    }
    std::vector<double> phase1_cost(n_ + m_, 0.0);
    for (std::size_t j = n_; j < n_ + m_; ++j) phase1_cost[j] = 1.0;
    run(phase1_cost, n_ + m_);
    if (objective(phase1_cost) > 1e-7)
      throw std::runtime_error("lp oracle: infeasible transportation instance");

    // Drive any lingering artificial variables out of the basis.
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      bool pivoted = false;
      for (std::size_t j = 0; j < n_ && !pivoted; ++j)
        if (std::abs(tab_[r][j]) > kPivotTol) {
          pivot(r, j);
          pivoted = true;
        }
      // A redundant row (rank deficiency) can stay basic at zero level.
    }

    std::vector<double> phase2_cost(n_ + m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) phase2_cost[j] = c_[j];
    run(phase2_cost, n_);  // artificials may not re-enter
    return objective(phase2_cost);
  }

 private:
  double objective(const std::vector<double>& cost) const {
    double v = 0.0;
    for (std::size_t r = 0; r < m_; ++r) v += cost[basis_[r]] * tab_[r].back();
    return v;
  }

  void run(const std::vector<double>& cost, std::size_t enter_limit) {
    const std::size_t total = n_ + m_;
    for (int iter = 0; iter < 100000; ++iter) {
      // Reduced costs: c_j - c_B' B^{-1} A_j (tableau already carries B^{-1}A).
      std::size_t enter = total;
      for (std::size_t j = 0; j < enter_limit; ++j) {
        double red = cost[j];
        for (std::size_t r = 0; r < m_; ++r) red -= cost[basis_[r]] * tab_[r][j];
        if (red < -1e-9) {  // Bland: first improving column
          enter = j;
          break;
        }
      }
      if (enter == total) return;  // optimal

      std::size_t leave = m_;
      double best_ratio = 0.0;
      for (std::size_t r = 0; r < m_; ++r) {
        if (tab_[r][enter] <= kPivotTol) continue;
        const double ratio = tab_[r].back() / tab_[r][enter];
        if (leave == m_ || ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave == m_) throw std::runtime_error("lp oracle: unbounded (malformed instance)");
      pivot(leave, enter);
    }
    throw std::runtime_error("lp oracle: simplex iteration cap hit");
  }

  void pivot(std::size_t r, std::size_t j) {
    const double piv = tab_[r][j];
    for (double& x : tab_[r]) x /= piv;
    for (std::size_t k = 0; k < m_; ++k) {
      if (k == r || std::abs(tab_[k][j]) <= 0.0) continue;
      const double f = tab_[k][j];
      for (std::size_t col = 0; col < tab_[k].size(); ++col)
        tab_[k][col] -= f * tab_[r][col];
    }
    basis_[r] = j;
  }

  std::size_t m_, n_;
  std::vector<std::vector<double>> a_;
  std::vector<double> b_;
  std::vector<double> c_;
  std::vector<std::vector<double>> tab_;
  std::vector<std::size_t> basis_;
};

}  // namespace

double lp_transport_cost(const std::vector<double>& supply,
                         const std::vector<double>& demand,
                         const std::vector<std::vector<double>>& cost) {
  const std::size_t ns = supply.size(), nt = demand.size();
  if (ns == 0 && nt == 0) return 0.0;
  const std::size_t nvar = ns * nt;
  std::vector<std::vector<double>> a(ns + nt, std::vector<double>(nvar, 0.0));
  std::vector<double> b(ns + nt, 0.0), c(nvar, 0.0);
  for (std::size_t i = 0; i < ns; ++i) {
    b[i] = supply[i];
    for (std::size_t j = 0; j < nt; ++j) {
      a[i][i * nt + j] = 1.0;
      a[ns + j][i * nt + j] = 1.0;
      c[i * nt + j] = cost[i][j];
    }
  }
  for (std::size_t j = 0; j < nt; ++j) b[ns + j] = demand[j];
  return TableauSimplex(std::move(a), std::move(b), std::move(c)).solve();
}

double lp_wasserstein1(const SparseMeasure& mu, const SparseMeasure& nu,
                       const DistanceFn& dist) {
  std::vector<std::vector<double>> cost(mu.size(), std::vector<double>(nu.size(), 0.0));
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j) {
      auto d = dist(mu.vertex[i], nu.vertex[j]);
      if (!d.has_value())
        throw std::runtime_error("lp_wasserstein1: unreachable charged pair");
      cost[i][j] = static_cast<double>(*d);
    }
  return lp_transport_cost(mu.mass, nu.mass, cost);
}

std::vector<std::vector<int>> all_pairs_distances(const Graph& g) {
  const Index n = g.num_vertices();
  constexpr int kInf = 1 << 28;
  std::vector<std::vector<int>> d(static_cast<std::size_t>(n),
                                  std::vector<int>(static_cast<std::size_t>(n), kInf));
  for (Index v = 0; v < n; ++v) d[v][v] = 0;
  for (const auto& [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (d[i][j] >= kInf) d[i][j] = -1;
  return d;
}

DistanceFn distance_oracle(const std::vector<std::vector<int>>& table) {
  return [&table](Index u, Index v) -> std::optional<int> {
    const int d = table[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
    if (d < 0) return std::nullopt;
    return d;
  };
}

namespace {
int matching_rec(const std::vector<std::vector<int>>& adj, std::size_t i,
                 std::vector<char>& used) {
  if (i == adj.size()) return 0;
  int best = matching_rec(adj, i + 1, used);  // leave i unmatched
  for (int j : adj[i]) {
    if (used[static_cast<std::size_t>(j)]) continue;
    used[static_cast<std::size_t>(j)] = 1;
    best = std::max(best, 1 + matching_rec(adj, i + 1, used));
    used[static_cast<std::size_t>(j)] = 0;
  }
  return best;
}
}  // namespace

int brute_force_max_matching(const Graph& g, std::span<const Index> left,
                             std::span<const Index> right) {
  std::vector<std::vector<int>> adj(left.size());
  for (std::size_t i = 0; i < left.size(); ++i)
    for (std::size_t j = 0; j < right.size(); ++j)
      if (g.has_edge(left[i], right[j])) adj[i].push_back(static_cast<int>(j));
  std::vector<char> used(right.size(), 0);
  return matching_rec(adj, 0, used);
}

double lp_lly(const Graph& g, const EdgeWeights& w, Index x, Index y) {
  const auto table = all_pairs_distances(g);
  const DistanceFn dist = distance_oracle(table);
  double prev = 0.0;
  for (int k = 1; k <= 40; ++k) {
    const double alpha = 1.0 - std::ldexp(1.0, -k);
    const SparseMeasure mu = lazy_measure(g, w, x, alpha);
    const SparseMeasure nu = lazy_measure(g, w, y, alpha);
    const double h = (1.0 - lp_wasserstein1(mu, nu, dist)) / (1.0 - alpha);
    if (k >= 2 && std::abs(h - prev) <= 1e-9) return h;
    prev = h;
  }
  throw std::runtime_error("lp_lly: probe schedule did not stabilize");
}

Graph erdos_renyi(Index n, double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<Index, Index>> edges;
  for (Index u = 0; u < n; ++u)
    for (Index v = u + 1; v < n; ++v)
      if (unit(rng) < p) edges.emplace_back(u, v);
  return Graph::build(n, edges);
}

Graph connected_erdos_renyi(Index n, double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<Index, Index>> edges;
  for (Index u = 0; u < n; ++u)
    for (Index v = u + 1; v < n; ++v)
      if (unit(rng) < p) edges.emplace_back(u, v);
  for (Index v = 1; v < n; ++v) {  // random attachment spine keeps it connected
    std::uniform_int_distribution<Index> pick(0, v - 1);
    edges.emplace_back(pick(rng), v);
  }
  return Graph::build(n, edges);
}

EdgeWeights random_weights(const Graph& g, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  EdgeWeights w(g.num_edges());
  for (Index e = 0; e < g.num_edges(); ++e) w[e] = dist(rng);
  return w;
}

SparseMeasure random_measure(Index n_vertices, Index max_support, std::mt19937_64& rng) {
  std::uniform_int_distribution<Index> size_dist(1, std::min(max_support, n_vertices));
  const Index k = size_dist(rng);
  std::vector<Index> verts(static_cast<std::size_t>(n_vertices));
  for (Index v = 0; v < n_vertices; ++v) verts[static_cast<std::size_t>(v)] = v;
  std::shuffle(verts.begin(), verts.end(), rng);
  std::uniform_real_distribution<double> mass_dist(0.05, 1.0);
  std::vector<std::pair<Index, double>> atoms;
  double total = 0.0;
  for (Index i = 0; i < k; ++i) {
    const double m = mass_dist(rng);
    atoms.emplace_back(verts[static_cast<std::size_t>(i)], m);
    total += m;
  }
  for (auto& [v, m] : atoms) m /= total;
  return SparseMeasure::from_atoms(std::move(atoms));
}

}  // namespace ricci::testing

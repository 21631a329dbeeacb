#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "ricci/graph.hpp"
#include "ricci/rational.hpp"

namespace ricci {

/// Finitely supported nonnegative measure: sorted unique vertices with
/// strictly positive masses. Zero-mass atoms are dropped at ingestion.
template <class Scalar>
struct BasicSparseMeasure {
  std::vector<Index> vertex;
  std::vector<Scalar> mass;

  static BasicSparseMeasure from_atoms(std::vector<std::pair<Index, Scalar>> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    BasicSparseMeasure m;
    for (const auto& [v, w] : atoms) {
      if (w < Scalar(0)) throw std::invalid_argument("negative mass atom");
      if (w == Scalar(0)) continue;
      if (!m.vertex.empty() && m.vertex.back() == v)
        m.mass.back() += w;
      else {
        m.vertex.push_back(v);
        m.mass.push_back(w);
      }
    }
    return m;
  }

  Scalar total() const {
    Scalar t(0);
    for (const auto& w : mass) t += w;
    return t;
  }
  std::size_t size() const { return vertex.size(); }
};

using SparseMeasure = BasicSparseMeasure<double>;

/// Distance oracle: exact nonnegative integer distance, or nullopt when the
/// pair is unreachable (or beyond a truncation cap). Assumed symmetric and
/// triangle-inequality consistent on the union of supports.
using DistanceFn = std::function<std::optional<int>(Index, Index)>;

struct UnreachableMassError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class Scalar>
struct BasicTransportResult {
  Scalar cost{};
  /// Optimal coupling as (source vertex, target vertex, mass) witnesses.
  std::vector<std::tuple<Index, Index, Scalar>> plan;
  /// Kantorovich potential f on support vertices (1-Lipschitz, integer
  /// valued for integer ground metrics); present when requested.
  std::optional<std::vector<std::pair<Index, double>>> dual_potentials;
};

using TransportResult = BasicTransportResult<double>;

namespace detail {

/// Exact transportation solver: successive shortest paths with integer node
/// potentials, batched per path-cost phase (Dijkstra via Dial buckets, then
/// max flow over the zero-reduced-cost admissible arcs). Masses are generic
/// (double or Rational); arc costs are small nonnegative integers so the
/// potentials stay exactly integral. Buffers persist across solves, and a
/// solved instance can be resumed after adding supply/demand (warm start for
/// the curvature probe schedule).
template <class Scalar, class CostT = std::int32_t>
class TransportationSolver {
 public:
  static constexpr CostT kInfCost = std::numeric_limits<CostT>::max();
  static constexpr std::int32_t kInfDist = std::numeric_limits<std::int32_t>::max() / 4;

  struct Flow {
    std::int32_t i, j;
    Scalar f;
  };

  /// cost is row-major ns×nt; kInfCost marks unreachable pairs.
  /// Returns false when some supply cannot reach any remaining demand.
  bool solve(std::int32_t ns, std::int32_t nt, const CostT* cost,
             std::vector<Scalar> supply, std::vector<Scalar> demand) {
    ns_ = ns;
    nt_ = nt;
    c_ = cost;
    rem_a_ = std::move(supply);
    rem_b_ = std::move(demand);
    hs_.assign(ns_, 0);
    ht_.assign(nt_, 0);
    hst_ = 0;
    arcs_.clear();
    out_i_.assign(ns_, {});
    into_j_.assign(nt_, {});
    dist_.assign(static_cast<std::size_t>(ns_) + nt_, kInfDist);
    settled_.assign(static_cast<std::size_t>(ns_) + nt_, 0);
    level_.assign(static_cast<std::size_t>(ns_) + nt_, -1);
    tight_.assign(ns_, {});
    return run_phases();
  }

  /// Adds delta supply at source i and delta demand at sink j, then resumes
  /// the phase loop from the current optimal basis. Valid because extra
  /// slack never violates dual feasibility or complementary slackness.
  bool augment_pair(std::int32_t i, std::int32_t j, const Scalar& delta) {
    rem_a_[i] += delta;
    rem_b_[j] += delta;
    return run_phases();
  }

  const std::vector<Flow>& flows() const { return arcs_; }
  /// LP duals in the convention u_i + v_j <= c_ij (equality on flow arcs).
  std::int64_t dual_u(std::int32_t i) const { return -hs_[i]; }
  std::int64_t dual_v(std::int32_t j) const { return ht_[j]; }

 private:
  bool run_phases() {
    int phase_guard = 8 * (ns_ + nt_) + 64;
    while (true) {
      bool have_supply = false, have_demand = false;
      for (std::int32_t i = 0; i < ns_ && !have_supply; ++i)
        have_supply = rem_a_[i] > Scalar(0);
      for (std::int32_t j = 0; j < nt_ && !have_demand; ++j)
        have_demand = rem_b_[j] > Scalar(0);
      if (!have_supply || !have_demand) break;
      if (--phase_guard < 0) throw std::logic_error("transport: phase loop did not converge");

      std::int32_t d_target = dijkstra_phase();
      if (d_target >= kInfDist) return false;  // unreachable remaining mass

      for (std::int32_t i = 0; i < ns_; ++i)
        hs_[i] += std::min(dist_[static_cast<std::size_t>(i)], d_target);
      for (std::int32_t j = 0; j < nt_; ++j)
        ht_[j] += std::min(dist_[static_cast<std::size_t>(ns_) + j], d_target);
      hst_ += d_target;

      collect_tight_arcs();
      admissible_max_flow();
    }
    return true;
  }

  // Multi-source Dijkstra over sources/sinks with reduced costs; returns the
  // shortest reduced distance to the virtual super-sink (free demand).
  std::int32_t dijkstra_phase() {
    std::fill(dist_.begin(), dist_.end(), kInfDist);
    std::fill(settled_.begin(), settled_.end(), 0);
    for (auto& b : buckets_) b.clear();

    auto push = [&](std::int32_t node, std::int32_t d) {
      if (d >= dist_[static_cast<std::size_t>(node)]) return;
      dist_[static_cast<std::size_t>(node)] = d;
      if (d >= static_cast<std::int32_t>(buckets_.size())) {
        if (d > (1 << 22)) throw std::logic_error("transport: unexpected path cost");
        buckets_.resize(static_cast<std::size_t>(d) + 1);
      }
      buckets_[static_cast<std::size_t>(d)].push_back(node);
    };

    // The super-source potential is free; price it at the largest free-source
    // potential so every init label is nonnegative (resumed solves re-free
    // sources whose potential has already grown).
    std::int32_t h_ss = 0;
    for (std::int32_t i = 0; i < ns_; ++i)
      if (rem_a_[i] > Scalar(0)) h_ss = std::max(h_ss, hs_[i]);
    for (std::int32_t i = 0; i < ns_; ++i)
      if (rem_a_[i] > Scalar(0)) push(i, h_ss - hs_[i]);

    std::int32_t best_target = kInfDist;
    for (std::size_t d = 0; d < buckets_.size(); ++d) {
      if (static_cast<std::int32_t>(d) >= best_target) break;
      // Indexed loop: pushes may grow buckets_ (and this very bucket).
      for (std::size_t bi = 0; bi < buckets_[d].size(); ++bi) {
        std::int32_t node = buckets_[d][bi];
        if (settled_[static_cast<std::size_t>(node)] ||
            dist_[static_cast<std::size_t>(node)] != static_cast<std::int32_t>(d))
          continue;
        settled_[static_cast<std::size_t>(node)] = 1;
        if (node < ns_) {
          const std::int32_t i = node;
          const CostT* row = c_ + static_cast<std::size_t>(i) * nt_;
          const std::int32_t base = static_cast<std::int32_t>(d) + hs_[i];
          for (std::int32_t j = 0; j < nt_; ++j) {
            if (row[j] == kInfCost) continue;
            push(ns_ + j, base + static_cast<std::int32_t>(row[j]) - ht_[j]);
          }
        } else {
          const std::int32_t j = node - ns_;
          if (rem_b_[j] > Scalar(0))
            best_target =
                std::min(best_target, static_cast<std::int32_t>(d) + ht_[j] - hst_);
          for (std::int32_t aid : into_j_[j]) {
            if (!(arcs_[static_cast<std::size_t>(aid)].f > Scalar(0))) continue;
            // Backward arc of a tight flow arc has reduced cost 0.
            push(arcs_[static_cast<std::size_t>(aid)].i, static_cast<std::int32_t>(d));
          }
        }
      }
    }
    return best_target;
  }

  void collect_tight_arcs() {
    for (std::int32_t i = 0; i < ns_; ++i) {
      tight_[static_cast<std::size_t>(i)].clear();
      const CostT* row = c_ + static_cast<std::size_t>(i) * nt_;
      const std::int32_t want = -hs_[i];  // tight iff c - ht[j] == -hs[i]
      for (std::int32_t j = 0; j < nt_; ++j)
        if (row[j] != kInfCost && static_cast<std::int32_t>(row[j]) - ht_[j] == want)
          tight_[static_cast<std::size_t>(i)].push_back(j);
    }
  }

  // Dinic max flow over admissible arcs (tight forward, positive-flow
  // backward); exhausts every augmenting path of the current phase cost.
  void admissible_max_flow() {
    while (bfs_levels()) {
      it_fw_.assign(static_cast<std::size_t>(ns_), 0);
      it_bw_.assign(static_cast<std::size_t>(nt_), 0);
      for (std::int32_t i = 0; i < ns_; ++i) {
        while (rem_a_[i] > Scalar(0) && level_[static_cast<std::size_t>(i)] == 0) {
          Scalar pushed = dfs_source(i, rem_a_[i]);
          if (!(pushed > Scalar(0))) break;
          rem_a_[i] -= pushed;
        }
      }
    }
  }

  bool bfs_levels() {
    std::fill(level_.begin(), level_.end(), -1);
    bfs_queue_.clear();
    for (std::int32_t i = 0; i < ns_; ++i)
      if (rem_a_[i] > Scalar(0)) {
        level_[static_cast<std::size_t>(i)] = 0;
        bfs_queue_.push_back(i);
      }
    bool reached_free_sink = false;
    for (std::size_t qi = 0; qi < bfs_queue_.size(); ++qi) {
      std::int32_t node = bfs_queue_[qi];
      if (node < ns_) {
        for (std::int32_t j : tight_[static_cast<std::size_t>(node)]) {
          if (level_[static_cast<std::size_t>(ns_) + j] >= 0) continue;
          level_[static_cast<std::size_t>(ns_) + j] = level_[static_cast<std::size_t>(node)] + 1;
          if (rem_b_[j] > Scalar(0)) reached_free_sink = true;
          bfs_queue_.push_back(ns_ + j);
        }
      } else {
        const std::int32_t j = node - ns_;
        for (std::int32_t aid : into_j_[j]) {
          if (!(arcs_[static_cast<std::size_t>(aid)].f > Scalar(0))) continue;
          std::int32_t i = arcs_[static_cast<std::size_t>(aid)].i;
          if (level_[static_cast<std::size_t>(i)] >= 0) continue;
          level_[static_cast<std::size_t>(i)] = level_[static_cast<std::size_t>(node)] + 1;
          bfs_queue_.push_back(i);
        }
      }
    }
    return reached_free_sink;
  }

  Scalar dfs_source(std::int32_t i, Scalar budget) {
    auto& it = it_fw_[static_cast<std::size_t>(i)];
    const auto& row = tight_[static_cast<std::size_t>(i)];
    for (; it < row.size(); ++it) {
      std::int32_t j = row[it];
      if (level_[static_cast<std::size_t>(ns_) + j] != level_[static_cast<std::size_t>(i)] + 1)
        continue;
      Scalar got = dfs_sink(j, budget);
      if (got > Scalar(0)) {
        add_flow(i, j, got);
        return got;
      }
    }
    level_[static_cast<std::size_t>(i)] = -1;
    return Scalar(0);
  }

  Scalar dfs_sink(std::int32_t j, Scalar budget) {
    if (rem_b_[j] > Scalar(0)) {
      Scalar take = std::min(budget, rem_b_[j]);
      rem_b_[j] -= take;
      return take;
    }
    auto& it = it_bw_[static_cast<std::size_t>(j)];
    for (; it < into_j_[j].size(); ++it) {
      std::int32_t aid = into_j_[j][it];
      // Recursion may grow arcs_: index, never hold a reference across it.
      const std::int32_t src = arcs_[static_cast<std::size_t>(aid)].i;
      const Scalar cap = arcs_[static_cast<std::size_t>(aid)].f;
      if (!(cap > Scalar(0)) ||
          level_[static_cast<std::size_t>(src)] != level_[static_cast<std::size_t>(ns_) + j] + 1)
        continue;
      Scalar got = dfs_source(src, std::min(budget, cap));
      if (got > Scalar(0)) {
        arcs_[static_cast<std::size_t>(aid)].f -= got;
        return got;
      }
    }
    level_[static_cast<std::size_t>(ns_) + j] = -1;
    return Scalar(0);
  }

  void add_flow(std::int32_t i, std::int32_t j, const Scalar& delta) {
    for (std::int32_t aid : out_i_[i]) {
      if (arcs_[static_cast<std::size_t>(aid)].j == j) {
        arcs_[static_cast<std::size_t>(aid)].f += delta;
        return;
      }
    }
    arcs_.push_back({i, j, delta});
    std::int32_t aid = static_cast<std::int32_t>(arcs_.size()) - 1;
    out_i_[i].push_back(aid);
    into_j_[j].push_back(aid);
  }

  std::int32_t ns_ = 0, nt_ = 0;
  const CostT* c_ = nullptr;
  std::vector<Scalar> rem_a_, rem_b_;
  std::vector<std::int32_t> hs_, ht_;
  std::int32_t hst_ = 0;
  std::vector<Flow> arcs_;
  std::vector<std::vector<std::int32_t>> out_i_, into_j_, tight_;
  std::vector<std::int32_t> dist_;
  std::vector<std::uint8_t> settled_;
  std::vector<std::int32_t> level_;
  std::vector<std::vector<std::int32_t>> buckets_;
  std::vector<std::int32_t> bfs_queue_;
  std::vector<std::size_t> it_fw_, it_bw_;
};

bool mass_totals_close(double a, double b);
bool mass_totals_close(const Rational& a, const Rational& b);

}  // namespace detail

/// Exact 1-Wasserstein distance between finitely supported measures under an
/// integer ground metric. Mass shared by both measures is left in place,
/// which is optimal for metric costs. Throws UnreachableMassError when the
/// measures charge mutually unreachable regions.
template <class Scalar>
BasicTransportResult<Scalar> wasserstein1(const BasicSparseMeasure<Scalar>& mu,
                                          const BasicSparseMeasure<Scalar>& nu,
                                          const DistanceFn& dist,
                                          bool want_duals = false);

extern template BasicTransportResult<double> wasserstein1<double>(
    const BasicSparseMeasure<double>&, const BasicSparseMeasure<double>&,
    const DistanceFn&, bool);
extern template BasicTransportResult<Rational> wasserstein1<Rational>(
    const BasicSparseMeasure<Rational>&, const BasicSparseMeasure<Rational>&,
    const DistanceFn&, bool);

/// Verifies the Kantorovich--Rubinstein certificate carried by a transport
/// result: the potential must be 1-Lipschitz on every charged pair with a
/// finite distance, and its objective must match the primal cost within tol.
/// Throws when the result carries no certificate.
bool kr_dual_check(const TransportResult& result, const SparseMeasure& mu,
                   const SparseMeasure& nu, const DistanceFn& dist, double tol = 1e-9);

}  // namespace ricci

#pragma once

#include <Eigen/Core>

#include "ricci/graph.hpp"
#include "ricci/transport.hpp"

namespace ricci {

/// Nonnegative symmetric edge weights aligned to the canonical edge index.
using EdgeWeights = Eigen::VectorXd;

EdgeWeights unit_weights(const Graph& g);

/// Weighted degree d_x(W) per vertex.
Eigen::VectorXd weighted_degrees(const Graph& g, const EdgeWeights& w);

/// α-lazy neighbor measure: mass α at x and (1−α)·W_xu/d_x(W) at each
/// neighbor u. Rejects vertices that are isolated under W.
SparseMeasure lazy_measure(const Graph& g, const EdgeWeights& w, Index x, double alpha);

/// α-Ollivier curvature 1 − W₁(m_x^α, m_y^α) on an edge {x,y}; transport
/// costs are unweighted graph distances (all ≤ 3 across the supports).
double kappa_alpha(const Graph& g, const EdgeWeights& w, Index x, Index y, double alpha);

struct CurvatureValue {
  double value = 0.0;
  std::vector<double> alpha_used;  // probe schedule α_k = 1 − 2^{−k}
  std::vector<double> h_values;    // h(α_k) = κ_α/(1−α), nondecreasing
  bool converged = false;
};

/// Lin–Lu–Yau curvature of an edge: the limit of κ_α/(1−α) as α↑1, extracted
/// by probing the geometric schedule α_k = 1 − 2^{−k} until two consecutive
/// values of the chord slope h(α) agree within 1e−9 (h is nondecreasing and
/// exactly constant beyond the last breakpoint of the parametric LP).
CurvatureValue lly_curvature(const Graph& g, const EdgeWeights& w, Index x, Index y);

/// One full reweighting sweep: LLY curvature of every edge, aligned to the
/// canonical edge index. A parallel map over edges; results are bitwise
/// independent of worker count. Throws listing edge indices if any
/// extraction fails to converge.
EdgeWeights curvature_all_edges(const Graph& g, const EdgeWeights& w, int num_threads = 0);

struct OverlapStats {
  double overlap = 0.0;       // Ov_xy(W)
  double p_max = 0.0;         // largest neighbor probability at either endpoint
  double deg_mismatch = 0.0;  // |d_x − d_y| / min(d_x, d_y)
};

/// Overlap functional Ov_xy(W) = p_x(y) + p_y(x) + Σ_{z∈Γ(x)∩Γ(y)} min(p_x(z), p_y(z)),
/// a deterministic upper bound on κ_W(x,y), plus the local kernel maximum and
/// degree mismatch used by its lower-bound counterpart.
OverlapStats overlap_stats(const Graph& g, const EdgeWeights& w, Index x, Index y);

namespace detail {

/// Per-thread workspace for curvature sweeps: support sets, scaled residual
/// masses and the 4-level cost matrix are built once per edge and reused
/// across the α probes (only the endpoint atoms change with α).
class EdgeCurvatureContext {
 public:
  EdgeCurvatureContext(const Graph& g, const EdgeWeights& w);

  CurvatureValue lly_edge(Index x, Index y);
  double kappa_alpha_edge(Index x, Index y, double alpha);

  const Eigen::VectorXd& wdeg() const { return wdeg_; }

 private:
  struct EdgeProblem {
    double overlap = 0.0;     // Ov_xy(W)
    double src_x_const = 0.0; // p_y(x): subtracted from the α-dependent atom at x
    double dst_y_const = 0.0; // p_x(y)
    std::int32_t ns = 0, nt = 0;
  };

  EdgeProblem build_edge_problem(Index x, Index y);
  double h_first_probe(const EdgeProblem& p, double big_atom);
  double h_resume_probe(const EdgeProblem& p, double delta);
  double extra_cost(const EdgeProblem& p) const;

  const Graph& g_;
  const EdgeWeights& w_;
  Eigen::VectorXd wdeg_;

  std::vector<Index> src_v_, dst_v_;
  std::vector<double> src_m_, dst_m_;  // scaled residual masses, slot 0 = endpoint
  std::vector<double> px_, py_;        // neighbor probabilities, dense scratch
  std::vector<std::uint8_t> cost_;     // distances in {1,2,3}
  TransportationSolver<double, std::uint8_t> solver_;
};

}  // namespace detail

}  // namespace ricci

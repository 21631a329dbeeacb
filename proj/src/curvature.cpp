#include "ricci/curvature.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "ricci/parallel.hpp"

namespace ricci {

EdgeWeights unit_weights(const Graph& g) {
  return EdgeWeights::Ones(g.num_edges());
}

Eigen::VectorXd weighted_degrees(const Graph& g, const EdgeWeights& w) {
  if (w.size() != g.num_edges())
    throw std::invalid_argument("weights not aligned to canonical edge index");
  Eigen::VectorXd d = Eigen::VectorXd::Zero(g.num_vertices());
  for (Index e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edge_endpoints(e);
    d[u] += w[e];
    d[v] += w[e];
  }
  return d;
}

SparseMeasure lazy_measure(const Graph& g, const EdgeWeights& w, Index x, double alpha) {
  g.check_vertex(x);
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in [0,1)");
  if (w.size() != g.num_edges())
    throw std::invalid_argument("weights not aligned to canonical edge index");

  double dx = 0.0;
  auto nbrs = g.neighbors(x);
  auto eids = g.incident_edges(x);
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    if (w[eids[k]] < 0.0)
      throw std::invalid_argument("negative edge weight at edge " + std::to_string(eids[k]));
    dx += w[eids[k]];
  }
  if (!(dx > 0.0))
    throw std::invalid_argument("vertex " + std::to_string(x) + " is isolated under W");

  std::vector<std::pair<Index, double>> atoms;
  atoms.reserve(nbrs.size() + 1);
  if (alpha > 0.0) atoms.emplace_back(x, alpha);
  for (std::size_t k = 0; k < nbrs.size(); ++k)
    atoms.emplace_back(nbrs[k], (1.0 - alpha) * w[eids[k]] / dx);
  return SparseMeasure::from_atoms(std::move(atoms));
}

double kappa_alpha(const Graph& g, const EdgeWeights& w, Index x, Index y, double alpha) {
  if (!g.has_edge(x, y))
    throw std::invalid_argument("kappa_alpha: {" + std::to_string(x) + "," +
                                std::to_string(y) + "} is not an edge");
  SparseMeasure mu = lazy_measure(g, w, x, alpha);
  SparseMeasure nu = lazy_measure(g, w, y, alpha);
  // All cross-support distances are at most 3 via the path s-x-y-t.
  DistanceFn dist = [&g](Index a, Index b) { return g.truncated_distance(a, b, 3); };
  return 1.0 - wasserstein1(mu, nu, dist).cost;
}

CurvatureValue lly_curvature(const Graph& g, const EdgeWeights& w, Index x, Index y) {
  detail::EdgeCurvatureContext ctx(g, w);
  return ctx.lly_edge(x, y);
}

OverlapStats overlap_stats(const Graph& g, const EdgeWeights& w, Index x, Index y) {
  if (!g.has_edge(x, y))
    throw std::invalid_argument("overlap_stats: {" + std::to_string(x) + "," +
                                std::to_string(y) + "} is not an edge");
  const Eigen::VectorXd d = weighted_degrees(g, w);
  if (!(d[x] > 0.0) || !(d[y] > 0.0))
    throw std::invalid_argument("overlap_stats: zero weighted degree at an endpoint");

  OverlapStats s;
  s.deg_mismatch = std::abs(d[x] - d[y]) / std::min(d[x], d[y]);

  auto nx = g.neighbors(x);
  auto ex = g.incident_edges(x);
  auto ny = g.neighbors(y);
  auto ey = g.incident_edges(y);

  double px_y = 0.0;
  for (std::size_t k = 0; k < nx.size(); ++k) {
    const double p = w[ex[k]] / d[x];
    s.p_max = std::max(s.p_max, p);
    if (nx[k] == y) px_y = p;
  }
  double py_x = 0.0;
  for (std::size_t k = 0; k < ny.size(); ++k) {
    const double p = w[ey[k]] / d[y];
    s.p_max = std::max(s.p_max, p);
    if (ny[k] == x) py_x = p;
  }

  double common = 0.0;
  for (std::size_t k = 0; k < nx.size(); ++k) {
    const Index z = nx[k];
    if (z == y || !g.adjacent(z, y)) continue;
    const double pz_y = w[g.edge_index(z, y).value()] / d[y];
    common += std::min(w[ex[k]] / d[x], pz_y);
  }
  s.overlap = px_y + py_x + common;
  return s;
}

namespace detail {

EdgeCurvatureContext::EdgeCurvatureContext(const Graph& g, const EdgeWeights& w)
    : g_(g), w_(w), wdeg_(weighted_degrees(g, w)) {
  for (Index e = 0; e < g.num_edges(); ++e)
    if (w[e] < 0.0)
      throw std::invalid_argument("negative edge weight at edge " + std::to_string(e));
  for (Index v = 0; v < g.num_vertices(); ++v)
    if (g.degree(v) > 0 && !(wdeg_[v] > 0.0))
      throw std::invalid_argument("vertex " + std::to_string(v) + " is isolated under W");
  px_.assign(static_cast<std::size_t>(g.num_vertices()), 0.0);
  py_.assign(static_cast<std::size_t>(g.num_vertices()), 0.0);
}

EdgeCurvatureContext::EdgeProblem EdgeCurvatureContext::build_edge_problem(Index x, Index y) {
  const double dx = wdeg_[x], dy = wdeg_[y];
  auto nx = g_.neighbors(x);
  auto ex = g_.incident_edges(x);
  auto ny = g_.neighbors(y);
  auto ey = g_.incident_edges(y);

  for (std::size_t k = 0; k < nx.size(); ++k) px_[nx[k]] = w_[ex[k]] / dx;
  for (std::size_t k = 0; k < ny.size(); ++k) py_[ny[k]] = w_[ey[k]] / dy;

  EdgeProblem p;
  p.src_x_const = py_[x];
  p.dst_y_const = px_[y];

  // Residual supports and scaled masses. The sign pattern of the residuals
  // does not depend on α, so one support serves every probe; slot 0 holds
  // the α-dependent endpoint atom.
  src_v_.assign(1, x);
  src_m_.assign(1, 0.0);
  dst_v_.assign(1, y);
  dst_m_.assign(1, 0.0);

  double common = 0.0;
  for (std::size_t k = 0; k < nx.size(); ++k) {
    const Index u = nx[k];
    if (u == y) continue;
    const double r = px_[u] - py_[u];
    if (r > 0.0) {
      src_v_.push_back(u);
      src_m_.push_back(r);
    }
    common += std::min(px_[u], py_[u]);  // zero unless u is a common neighbor
  }
  for (std::size_t k = 0; k < ny.size(); ++k) {
    const Index v = ny[k];
    if (v == x) continue;
    const double r = py_[v] - px_[v];
    if (r > 0.0) {
      dst_v_.push_back(v);
      dst_m_.push_back(r);
    }
  }
  p.overlap = py_[x] + px_[y] + common;

  p.ns = static_cast<std::int32_t>(src_v_.size());
  p.nt = static_cast<std::int32_t>(dst_v_.size());
  cost_.resize(static_cast<std::size_t>(p.ns) * p.nt);
  for (std::int32_t i = 0; i < p.ns; ++i) {
    const Index s = src_v_[static_cast<std::size_t>(i)];
    std::uint8_t* row = cost_.data() + static_cast<std::size_t>(i) * p.nt;
    for (std::int32_t j = 0; j < p.nt; ++j) {
      const Index t = dst_v_[static_cast<std::size_t>(j)];
      // Exact distances within the supports: 1 on edges, 2 with a common
      // neighbor, 3 otherwise (the path s-x-y-t caps everything at 3).
      row[j] = g_.adjacent(s, t) ? 1 : (g_.have_common_neighbor(s, t) ? 2 : 3);
    }
  }

  for (std::size_t k = 0; k < nx.size(); ++k) px_[nx[k]] = 0.0;
  for (std::size_t k = 0; k < ny.size(); ++k) py_[ny[k]] = 0.0;
  return p;
}

double EdgeCurvatureContext::extra_cost(const EdgeProblem& p) const {
  double extra = 0.0;
  for (const auto& arc : solver_.flows()) {
    if (!(arc.f > 0.0)) continue;
    extra += arc.f * (cost_[static_cast<std::size_t>(arc.i) * p.nt + arc.j] - 1);
  }
  return extra;
}

double EdgeCurvatureContext::h_first_probe(const EdgeProblem& p, double big_atom) {
  std::vector<double> supply = src_m_;
  std::vector<double> demand = dst_m_;
  supply[0] = big_atom - p.src_x_const;
  demand[0] = big_atom - p.dst_y_const;
  if (!solver_.solve(p.ns, p.nt, cost_.data(), std::move(supply), std::move(demand)))
    throw std::logic_error("curvature transport infeasible (unexpected)");
  return p.overlap - extra_cost(p);
}

// Raising α only grows the endpoint atoms by the same amount, so the next
// probe resumes the previous optimal basis instead of solving cold.
double EdgeCurvatureContext::h_resume_probe(const EdgeProblem& p, double delta) {
  if (!solver_.augment_pair(0, 0, delta))
    throw std::logic_error("curvature transport infeasible (unexpected)");
  return p.overlap - extra_cost(p);
}

CurvatureValue EdgeCurvatureContext::lly_edge(Index x, Index y) {
  if (!g_.has_edge(x, y))
    throw std::invalid_argument("lly_curvature: {" + std::to_string(x) + "," +
                                std::to_string(y) + "} is not an edge");
  // Symmetrized by construction: always solve from the canonical ordering.
  if (x > y) std::swap(x, y);

  constexpr int kMaxProbe = 40;
  constexpr double kTol = 1e-9;

  EdgeProblem p = build_edge_problem(x, y);
  CurvatureValue out;
  double prev = 0.0;
  for (int k = 1; k <= kMaxProbe; ++k) {
    // α_k = 1 − 2^{−k}; the endpoint atom in scaled units is α/(1−α) = 2^k − 1.
    const double h = k == 1 ? h_first_probe(p, 1.0)
                            : h_resume_probe(p, std::ldexp(1.0, k - 1));
    out.alpha_used.push_back(1.0 - std::ldexp(1.0, -k));
    out.h_values.push_back(h);
    if (k >= 2 && std::abs(h - prev) <= kTol) {
      out.value = h;
      out.converged = true;
      return out;
    }
    prev = h;
  }
  out.value = prev;
  out.converged = false;
  return out;
}

double EdgeCurvatureContext::kappa_alpha_edge(Index x, Index y, double alpha) {
  if (x > y) std::swap(x, y);
  if (!(alpha >= 0.5 && alpha < 1.0))
    throw std::invalid_argument("fast path requires alpha in [1/2, 1)");
  EdgeProblem p = build_edge_problem(x, y);
  const double h = h_first_probe(p, alpha / (1.0 - alpha));
  return (1.0 - alpha) * h;
}

}  // namespace detail

EdgeWeights curvature_all_edges(const Graph& g, const EdgeWeights& w, int num_threads) {
  const Index m = g.num_edges();
  EdgeWeights out(m);
  std::vector<std::uint8_t> failed(static_cast<std::size_t>(m), 0);

  const int threads = resolve_threads(num_threads);
  std::vector<std::unique_ptr<detail::EdgeCurvatureContext>> ctx;
  ctx.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    ctx.push_back(std::make_unique<detail::EdgeCurvatureContext>(g, w));

  parallel_for_index(
      m,
      [&](int worker, std::int64_t e) {
        const auto [x, y] = g.edge_endpoints(static_cast<Index>(e));
        CurvatureValue cv = ctx[static_cast<std::size_t>(worker)]->lly_edge(x, y);
        out[static_cast<Index>(e)] = cv.value;
        if (!cv.converged) failed[static_cast<std::size_t>(e)] = 1;
      },
      threads);

  std::vector<Index> bad;
  for (Index e = 0; e < m; ++e)
    if (failed[static_cast<std::size_t>(e)]) bad.push_back(e);
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "curvature extraction failed to converge on " << bad.size() << " edge(s):";
    for (std::size_t k = 0; k < bad.size() && k < 10; ++k) msg << ' ' << bad[k];
    if (bad.size() > 10) msg << " ...";
    throw std::runtime_error(msg.str());
  }
  return out;
}

}  // namespace ricci

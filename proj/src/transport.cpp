#include "ricci/transport.hpp"

#include <cmath>
#include <unordered_map>

namespace ricci {

namespace detail {

bool mass_totals_close(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

bool mass_totals_close(const Rational& a, const Rational& b) { return a == b; }

namespace {

template <class Scalar>
void validate_measure(const BasicSparseMeasure<Scalar>& m, const char* name) {
  for (std::size_t k = 0; k < m.vertex.size(); ++k) {
    if (!(m.mass[k] > Scalar(0)))
      throw std::invalid_argument(std::string(name) + ": nonpositive mass atom");
    if (k > 0 && m.vertex[k - 1] >= m.vertex[k])
      throw std::invalid_argument(std::string(name) +
                                  ": atoms must be sorted and unique (use from_atoms)");
  }
}

bool marginal_close(double got, double want) {
  return std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want));
}
bool marginal_close(const Rational& got, const Rational& want) { return got == want; }

}  // namespace

}  // namespace detail

template <class Scalar>
BasicTransportResult<Scalar> wasserstein1(const BasicSparseMeasure<Scalar>& mu,
                                          const BasicSparseMeasure<Scalar>& nu,
                                          const DistanceFn& dist, bool want_duals) {
  detail::validate_measure(mu, "mu");
  detail::validate_measure(nu, "nu");
  if (!detail::mass_totals_close(mu.total(), nu.total()))
    throw std::invalid_argument("wasserstein1: measures have different total mass");

  BasicTransportResult<Scalar> out;

  // Shared mass stays in place (optimal for metric ground costs); the flow
  // problem is solved on the residuals only.
  std::vector<Index> src_v, dst_v;
  std::vector<Scalar> src_m, dst_m;
  {
    std::size_t i = 0, j = 0;
    while (i < mu.size() || j < nu.size()) {
      if (j >= nu.size() || (i < mu.size() && mu.vertex[i] < nu.vertex[j])) {
        src_v.push_back(mu.vertex[i]);
        src_m.push_back(mu.mass[i]);
        ++i;
      } else if (i >= mu.size() || nu.vertex[j] < mu.vertex[i]) {
        dst_v.push_back(nu.vertex[j]);
        dst_m.push_back(nu.mass[j]);
        ++j;
      } else {
        const Index v = mu.vertex[i];
        const Scalar shared = std::min(mu.mass[i], nu.mass[j]);
        out.plan.emplace_back(v, v, shared);
        Scalar ds = mu.mass[i] - shared;
        Scalar dt = nu.mass[j] - shared;
        if (ds > Scalar(0)) {
          src_v.push_back(v);
          src_m.push_back(ds);
        }
        if (dt > Scalar(0)) {
          dst_v.push_back(v);
          dst_m.push_back(dt);
        }
        ++i;
        ++j;
      }
    }
  }

  const auto ns = static_cast<std::int32_t>(src_v.size());
  const auto nt = static_cast<std::int32_t>(dst_v.size());
  using Solver = detail::TransportationSolver<Scalar>;

  std::vector<std::int32_t> cost(static_cast<std::size_t>(ns) * nt);
  for (std::int32_t i = 0; i < ns; ++i)
    for (std::int32_t j = 0; j < nt; ++j) {
      auto d = dist(src_v[static_cast<std::size_t>(i)], dst_v[static_cast<std::size_t>(j)]);
      if (d.has_value() && *d < 0)
        throw std::invalid_argument("wasserstein1: negative ground distance");
      cost[static_cast<std::size_t>(i) * nt + j] = d.has_value() ? *d : Solver::kInfCost;
    }

  Solver solver;
  if (!solver.solve(ns, nt, cost.data(), src_m, dst_m))
    throw UnreachableMassError(
        "wasserstein1: measures charge mutually unreachable vertices");

  out.cost = Scalar(0);
  for (const auto& arc : solver.flows()) {
    if (!(arc.f > Scalar(0))) continue;
    out.cost += arc.f * static_cast<long long>(
                            cost[static_cast<std::size_t>(arc.i) * nt + arc.j]);
    out.plan.emplace_back(src_v[static_cast<std::size_t>(arc.i)],
                          dst_v[static_cast<std::size_t>(arc.j)], arc.f);
  }

  // Plan marginals must reproduce the inputs exactly up to rounding.
  {
    std::unordered_map<Index, Scalar> row, col;
    for (const auto& [s, t, f] : out.plan) {
      row[s] += f;
      col[t] += f;
    }
    for (std::size_t k = 0; k < mu.size(); ++k)
      if (!detail::marginal_close(row[mu.vertex[k]], mu.mass[k]))
        throw std::logic_error("wasserstein1: plan row marginal mismatch");
    for (std::size_t k = 0; k < nu.size(); ++k)
      if (!detail::marginal_close(col[nu.vertex[k]], nu.mass[k]))
        throw std::logic_error("wasserstein1: plan column marginal mismatch");
  }

  if (want_duals) {
    // Kantorovich potential from the c-transform of the sink duals:
    // f(z) = min_j ( d(z, t_j) - v_j ), an integer-valued 1-Lipschitz
    // function whose objective matches the primal cost.
    std::vector<std::pair<Index, double>> f;
    std::vector<Index> support;
    support.reserve(mu.size() + nu.size());
    support.insert(support.end(), mu.vertex.begin(), mu.vertex.end());
    support.insert(support.end(), nu.vertex.begin(), nu.vertex.end());
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    for (Index z : support) {
      std::int64_t best = 0;
      bool found = false;
      for (std::int32_t j = 0; j < nt; ++j) {
        auto d = dist(z, dst_v[static_cast<std::size_t>(j)]);
        if (!d.has_value()) continue;
        std::int64_t val = static_cast<std::int64_t>(*d) - solver.dual_v(j);
        if (!found || val < best) {
          best = val;
          found = true;
        }
      }
      f.emplace_back(z, found ? static_cast<double>(best) : 0.0);
    }
    out.dual_potentials = std::move(f);
  }
  return out;
}

template BasicTransportResult<double> wasserstein1<double>(
    const BasicSparseMeasure<double>&, const BasicSparseMeasure<double>&,
    const DistanceFn&, bool);
template BasicTransportResult<Rational> wasserstein1<Rational>(
    const BasicSparseMeasure<Rational>&, const BasicSparseMeasure<Rational>&,
    const DistanceFn&, bool);

bool kr_dual_check(const TransportResult& result, const SparseMeasure& mu,
                   const SparseMeasure& nu, const DistanceFn& dist, double tol) {
  if (!result.dual_potentials.has_value())
    throw std::invalid_argument("kr_dual_check: no certificate (dual potentials absent)");

  std::unordered_map<Index, double> f;
  for (const auto& [v, val] : result.dual_potentials.value()) f[v] = val;

  std::vector<Index> charged;
  charged.insert(charged.end(), mu.vertex.begin(), mu.vertex.end());
  charged.insert(charged.end(), nu.vertex.begin(), nu.vertex.end());
  std::sort(charged.begin(), charged.end());
  charged.erase(std::unique(charged.begin(), charged.end()), charged.end());

  for (Index z : charged)
    if (f.find(z) == f.end())
      throw std::invalid_argument("kr_dual_check: certificate misses charged vertex " +
                                  std::to_string(z));

  for (std::size_t a = 0; a < charged.size(); ++a)
    for (std::size_t b = a + 1; b < charged.size(); ++b) {
      auto d = dist(charged[a], charged[b]);
      if (!d.has_value()) continue;
      if (std::abs(f[charged[a]] - f[charged[b]]) > static_cast<double>(*d) + tol)
        return false;
    }

  double obj = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) obj += f[mu.vertex[k]] * mu.mass[k];
  for (std::size_t k = 0; k < nu.size(); ++k) obj -= f[nu.vertex[k]] * nu.mass[k];
  return std::abs(obj - result.cost) <= tol;
}

}  // namespace ricci

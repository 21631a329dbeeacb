#include "ricci/sbm.hpp"

#include <cmath>
#include <stdexcept>

#include "ricci/meanfield.hpp"

namespace ricci {

namespace {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Uniform double in [0,1) keyed by (seed, u, v); u < v.
inline double pair_uniform(std::uint64_t seed, Index u, Index v) {
  std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
                      static_cast<std::uint32_t>(v);
  std::uint64_t z = splitmix64(seed ^ splitmix64(key));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

void validate_params(const SbmParams& p) {
  if (p.n < 1) throw std::invalid_argument("SBM block size n must be >= 1");
  if (!(p.p0 >= 0.0 && p.p0 <= 1.0) || !(p.p1 >= 0.0 && p.p1 <= 1.0))
    throw std::invalid_argument("SBM probabilities must lie in [0,1]");
  if (p.p1 > p.p0) throw std::invalid_argument("SBM requires p1 <= p0");
}

}  // namespace

std::pair<Graph, Labels> sample_sbm(const SbmParams& params) {
  validate_params(params);
  const Index n2 = 2 * params.n;
  std::vector<std::pair<Index, Index>> edges;
  edges.reserve(static_cast<std::size_t>(
      0.55 * params.p0 * static_cast<double>(n2) * static_cast<double>(n2) / 2.0 + 16));
  for (Index u = 0; u < n2; ++u) {
    const bool u_first = u < params.n;
    for (Index v = u + 1; v < n2; ++v) {
      const double p = (u_first == (v < params.n)) ? params.p0 : params.p1;
      if (pair_uniform(params.seed, u, v) < p) edges.emplace_back(u, v);
    }
  }
  return {Graph::build(n2, edges), Labels::balanced(params.n)};
}

WindowReport check_window(const SbmParams& params, double rho, int T) {
  validate_params(params);
  if (!(rho > 0.0 && rho < 0.5)) throw std::invalid_argument("rho must lie in (0,1/2)");
  if (T < 1) throw std::invalid_argument("horizon T must be >= 1");

  const double n = static_cast<double>(params.n);
  const double logn = std::log(n);
  WindowReport w;
  w.p_bar = 0.5 * (params.p0 + params.p1);
  w.ratio_p1_p0 = params.p0 > 0.0 ? params.p1 / params.p0 : 0.0;
  w.p0_cap = 1.0 - rho;
  w.rho_ok = (w.ratio_p1_p0 >= rho && w.ratio_p1_p0 <= 1.0 - rho && params.p0 <= w.p0_cap);

  w.mdt_ratio = n * std::pow(w.p_bar, 3.0) / logn;
  w.mdt_ok = w.mdt_ratio >= 2.0;
  w.mdt_T_ratio = n * std::pow(w.p_bar, 2.0 * T + 1.0) / logn;
  w.mdt_T_ok = w.mdt_T_ratio >= 2.0;

  w.eps_n = std::sqrt(logn / (n * w.p_bar));
  w.eta_n = w.eps_n / w.p_bar;
  w.eta_nT = w.eps_n / std::pow(w.p_bar, static_cast<double>(T));

  w.d0 = (n - 1.0) * params.p0 + n * params.p1;
  const auto [w_in, w_out] = population_levels<double>(params.n, params.p0, params.p1);
  w.d1 = (n - 1.0) * params.p0 * w_in + n * params.p1 * w_out;
  return w;
}

}  // namespace ricci

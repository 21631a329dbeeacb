#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ricci/graph.hpp"

namespace ricci {

namespace detail {
template <class Scalar>
void check_block_probs(Index n, Scalar p0, Scalar p1) {
  if (n < 2) throw std::invalid_argument("block size n must be >= 2");
  if (!(p0 > Scalar(0)) || p0 > Scalar(1) || p1 < Scalar(0) || p1 > p0)
    throw std::invalid_argument("require 0 <= p1 <= p0 <= 1 with p0 > 0");
}
}  // namespace detail

/// Population curvature levels
///   w_in  = ((n−2)p0² + n p1²) / ((n−1)p0 + n p1)
///   w_out = ((2n−2)p0 p1)      / ((n−1)p0 + n p1)
template <class Scalar = double>
std::pair<Scalar, Scalar> population_levels(Index n, Scalar p0, Scalar p1) {
  detail::check_block_probs(n, p0, p1);
  const Scalar den = Scalar(n - 1) * p0 + Scalar(n) * p1;
  return {(Scalar(n - 2) * p0 * p0 + Scalar(n) * p1 * p1) / den,
          Scalar(2 * n - 2) * p0 * p1 / den};
}

/// One step of the two-weight mean-field map Φ_n(a,b).
template <class Scalar = double>
std::pair<Scalar, Scalar> mean_field_map(Index n, Scalar p0, Scalar p1, Scalar a, Scalar b) {
  detail::check_block_probs(n, p0, p1);
  if (!(a > Scalar(0)) || !(b > Scalar(0)))
    throw std::invalid_argument("mean_field_map requires a, b > 0");
  const Scalar den = Scalar(n - 1) * p0 * a + Scalar(n) * p1 * b;
  return {(Scalar(n - 2) * p0 * p0 * a + Scalar(n) * p1 * p1 * b) / den,
          Scalar(2 * n - 2) * p0 * p1 * b / den};
}

/// Scalar contrast recursion f_n(s) = 2(n−1)p0 p1 s / ((n−2)p0² + n p1² s);
/// the ratio s_{t+1} = w_out^{(t+1)}/w_in^{(t+1)} obeys s_{t+1} = f_n(s_t).
template <class Scalar = double>
Scalar contrast_map(Index n, Scalar p0, Scalar p1, Scalar s) {
  detail::check_block_probs(n, p0, p1);
  return Scalar(2 * (n - 1)) * p0 * p1 * s /
         (Scalar(n - 2) * p0 * p0 + Scalar(n) * p1 * p1 * s);
}

/// Fixed point s* = max{0, (2(n−1)p0p1 − (n−2)p0²) / (n p1²)} of f_n.
template <class Scalar = double>
Scalar contrast_fixed_point(Index n, Scalar p0, Scalar p1) {
  detail::check_block_probs(n, p0, p1);
  if (!(p1 > Scalar(0))) return Scalar(0);
  const Scalar num = Scalar(2 * (n - 1)) * p0 * p1 - Scalar(n - 2) * p0 * p0;
  return std::max(Scalar(0), num / (Scalar(n) * p1 * p1));
}

/// Benchmark eigengap level Δ^{(n)}(s) = ((n−1)p0 − n p1 s) / ((n−1)p0 + n p1 s).
template <class Scalar = double>
Scalar delta_of_contrast(Index n, Scalar p0, Scalar p1, Scalar s) {
  detail::check_block_probs(n, p0, p1);
  const Scalar a = Scalar(n - 1) * p0, b = Scalar(n) * p1 * s;
  return (a - b) / (a + b);
}

/// Deterministic two-weight benchmark: (w_in^{(t)}, w_out^{(t)}) for
/// t = 0..T from w^{(0)} = (1,1) under Φ_n, with the contrast s_t, the
/// benchmark gap Δ_t^{(n)}, and the closed-form fixed point s*.
struct MeanFieldTrajectory {
  std::vector<double> w_in, w_out, s, delta;  // indexed by t = 0..T
  double s_star = 0.0;

  int horizon() const { return static_cast<int>(w_in.size()) - 1; }
};

inline MeanFieldTrajectory benchmark_trajectory(Index n, double p0, double p1, int T) {
  detail::check_block_probs(n, p0, p1);
  if (T < 0) throw std::invalid_argument("horizon T must be >= 0");
  MeanFieldTrajectory tr;
  tr.s_star = contrast_fixed_point(n, p0, p1);
  double a = 1.0, b = 1.0;
  for (int t = 0; t <= T; ++t) {
    if (t > 0) std::tie(a, b) = mean_field_map(n, p0, p1, a, b);
    tr.w_in.push_back(a);
    tr.w_out.push_back(b);
    tr.s.push_back(b / a);
    tr.delta.push_back(delta_of_contrast(n, p0, p1, b / a));
  }
  return tr;
}

/// Large-n contrast quantities: r, its finite-n variant r_n^{(0)}, the
/// post-reweighting contrast r_curv = r/(1−r+r²), the mean-field gap gain
/// r_curv − r = r²(1−r)/(1−r+r²), and the population level proxies.
struct ContrastSummary {
  double r = 0.0;
  double r_n0 = 0.0;
  double r_curv = 0.0;
  double mf_gain = 0.0;
  double w_in_pop = 0.0;
  double w_out_pop = 0.0;
};

inline ContrastSummary contrast_summary(Index n, double p0, double p1) {
  detail::check_block_probs(n, p0, p1);
  ContrastSummary c;
  const double pbar = 0.5 * (p0 + p1);
  c.r = (p0 - p1) / (p0 + p1);
  c.r_n0 = ((n - 1) * p0 - n * p1) / ((n - 1) * p0 + n * p1);
  c.r_curv = c.r / (1.0 - c.r + c.r * c.r);
  c.mf_gain = c.r * c.r * (1.0 - c.r) / (1.0 - c.r + c.r * c.r);
  c.w_in_pop = pbar * (1.0 + c.r * c.r);
  c.w_out_pop = pbar * (1.0 - c.r * c.r);
  return c;
}

}  // namespace ricci

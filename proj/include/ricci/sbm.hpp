#pragma once

#include <cstdint>
#include <utility>

#include "ricci/graph.hpp"

namespace ricci {

/// Balanced two-block SBM on 2n vertices: block 1 is 0..n−1, block 2 is
/// n..2n−1; within-block pairs are edges with probability p0, cross-block
/// with probability p1.
struct SbmParams {
  Index n = 0;
  double p0 = 0.0;
  double p1 = 0.0;
  std::uint64_t seed = 0;
};

/// Seeded sampling with a counter-based per-pair stream: the coin for an
/// unordered pair {u,v} depends only on (seed,u,v), so regeneration is exact
/// and independent of evaluation order. Degenerate endpoints p1 = 0 or
/// p0 = 1 are permitted and give deterministic graphs.
std::pair<Graph, Labels> sample_sbm(const SbmParams& params);

/// Rate quantities and window verdicts for a parameter choice. Asymptotic
/// "≫" conditions are reported as raw ratios plus the finite-n proxy verdict
/// ratio ≥ 2.
struct WindowReport {
  double p_bar = 0.0;
  double ratio_p1_p0 = 0.0;  // achieved p1/p0
  double p0_cap = 0.0;       // 1 − ρ, the allowed ceiling for p0
  bool rho_ok = false;       // ρ ≤ p1/p0 ≤ 1−ρ and p0 ≤ 1−ρ
  double mdt_ratio = 0.0;    // n p̄³ / log n
  bool mdt_ok = false;
  double mdt_T_ratio = 0.0;  // n p̄^{2T+1} / log n
  bool mdt_T_ok = false;
  double eps_n = 0.0;        // √(log n / (n p̄))
  double eta_n = 0.0;        // ε_n / p̄
  double eta_nT = 0.0;       // ε_n / p̄^T
  double d0 = 0.0;           // (n−1)p0 + n p1
  double d1 = 0.0;           // (n−1)p0 w_in^{(n)} + n p1 w_out^{(n)}
};

WindowReport check_window(const SbmParams& params, double rho, int T);

}  // namespace ricci

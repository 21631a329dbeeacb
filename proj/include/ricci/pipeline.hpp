#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ricci/curvature.hpp"
#include "ricci/graph.hpp"
#include "ricci/meanfield.hpp"
#include "ricci/sbm.hpp"
#include "ricci/spectral.hpp"

namespace ricci {

struct IterateState {
  int t = 0;
  EdgeWeights weights;
  double min_weight = 0.0;
  double max_weight = 0.0;
  double min_wdeg = 0.0;
};

/// Iterated Ricci reweighting on the fixed edge support: W^(0) = A and
/// W^(t+1) = κ_{W^(t)} ∘ A, transport costs always in the unweighted metric.
/// Aborts (with step and vertex/edge context) as soon as a weight or a
/// weighted degree fails to stay strictly positive; positivity only holds on
/// a high-probability event, and leaving it must be loud.
std::vector<IterateState> ricci_iterate(const Graph& g, int T, int num_threads = 0);

/// Observed two-level benchmark W*(t) = K(w_in^(t), w_out^(t)) ∘ A.
EdgeWeights benchmark_weights(const Graph& g, const Labels& labels,
                              const MeanFieldTrajectory& trajectory, int t);

struct TrackingRecord {
  int t = 0;
  double delta_max = 0.0;  // ‖W^(t) − W*^(t)‖_max
  double lap_dev = 0.0;    // ‖L(W^(t)) − L(W*^(t))‖_op
  double gap_emp = 0.0;    // Γ^(t)
  double gap_star = 0.0;   // Γ*^(t)
  double gap_pop = 0.0;    // Δ_t^(n), the closed-form population gap
};

std::vector<TrackingRecord> tracking_error(const Graph& g,
                                           const std::vector<IterateState>& iterates,
                                           const std::vector<EdgeWeights>& benchmarks,
                                           const std::vector<double>& gap_pop);

/// Calibrated thresholds standing in for asymptotic constants that have no
/// finite-n value; every one is echoed into the report next to the observed
/// quantity it gates.
struct Thresholds {
  double conc_band_factor = 0.5;  // level band, × (w_in^(n) − w_out^(n))
  double err_max = 0.02;          // misclustering cap per seed
  double gain_lo = 0.3;           // realized/predicted mean gain window
  double gain_hi = 3.0;
  double delta1_factor = 3.0;     // δ₁ cap, × ε_n
  double delta2_factor = 3.0;     // δ₂ cap, × ε_n/p̄
  double gap_drop_tol = 0.05;     // Γ^(2) ≥ Γ^(1) − tol
  Index hall_sample = 200;        // sampled edges for the good-event check
  double hall_pass_rate = 1.0;
};

struct ExperimentConfig {
  Index n = 0;
  double p0 = 0.0;
  double p1 = 0.0;
  std::vector<std::uint64_t> seeds;
  int T = 1;
  double rho = 0.1;
  Index subsample_edges = 2000;  // 0 = full sweep
  bool force = false;            // run iterate outside the MDT(T) window
  Thresholds thresholds;
  int threads = 0;  // execution detail; not echoed into reports
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json experiment_config_to_json(const ExperimentConfig& c);

/// Runs one of the three canonical experiments ("concentration", "one-step",
/// "iterate") and returns the full report. Window violations are recorded as
/// warnings; runtime failures throw. Reports contain no timestamps and are
/// bytewise reproducible from (config, seed) on one platform.
nlohmann::json run_experiment(const std::string& kind, const ExperimentConfig& config);

/// True iff every acceptance rule inside a report passed.
bool report_all_passed(const nlohmann::json& report);

}  // namespace ricci

#include "ricci/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

#include "ricci/parallel.hpp"

namespace ricci {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kSaltConcentration = 0x636f6e63ull;  // edge subsample stream
constexpr std::uint64_t kSaltHall = 0x68616c6cull;           // hall-check edge stream

/// Seeded selection of k distinct edge indices (all of them when k is 0 or
/// exceeds m); returned sorted so downstream iteration order is canonical.
std::vector<Index> sample_edge_ids(Index m, Index k, std::uint64_t seed, std::uint64_t salt) {
  std::vector<Index> ids(static_cast<std::size_t>(m));
  for (Index e = 0; e < m; ++e) ids[static_cast<std::size_t>(e)] = e;
  if (k <= 0 || k >= m) return ids;
  std::mt19937_64 rng(mix64(seed ^ mix64(salt)));
  for (Index i = 0; i < k; ++i) {
    std::uniform_int_distribution<Index> pick(i, m - 1);
    std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(pick(rng))]);
  }
  ids.resize(static_cast<std::size_t>(k));
  std::sort(ids.begin(), ids.end());
  return ids;
}

/// LLY curvature on a subset of edges; parallel map with per-worker contexts.
Eigen::VectorXd curvature_on_edges(const Graph& g, const EdgeWeights& w,
                                   const std::vector<Index>& edge_ids, int num_threads) {
  const int threads = resolve_threads(num_threads);
  std::vector<std::unique_ptr<detail::EdgeCurvatureContext>> ctx;
  for (int t = 0; t < threads; ++t)
    ctx.push_back(std::make_unique<detail::EdgeCurvatureContext>(g, w));

  Eigen::VectorXd out(static_cast<Index>(edge_ids.size()));
  std::vector<std::uint8_t> failed(edge_ids.size(), 0);
  parallel_for_index(
      static_cast<std::int64_t>(edge_ids.size()),
      [&](int worker, std::int64_t k) {
        const auto [x, y] = g.edge_endpoints(edge_ids[static_cast<std::size_t>(k)]);
        CurvatureValue cv = ctx[static_cast<std::size_t>(worker)]->lly_edge(x, y);
        out[static_cast<Index>(k)] = cv.value;
        if (!cv.converged) failed[static_cast<std::size_t>(k)] = 1;
      },
      threads);
  for (std::size_t k = 0; k < failed.size(); ++k)
    if (failed[k])
      throw std::runtime_error("curvature extraction failed on edge " +
                               std::to_string(edge_ids[k]));
  return out;
}

struct RuleSet {
  nlohmann::json rules = nlohmann::json::array();
  bool all_passed = true;

  void add(const std::string& name, double threshold, double observed, bool pass) {
    rules.push_back({{"name", name},
                     {"threshold", threshold},
                     {"observed", observed},
                     {"pass", pass}});
    all_passed = all_passed && pass;
  }
  nlohmann::json finish() const {
    return {{"rules", rules}, {"all_passed", all_passed}};
  }
};

nlohmann::json type_stats(const std::vector<double>& vals, double level, double eps_n) {
  nlohmann::json j;
  j["count"] = vals.size();
  if (vals.empty()) return j;
  double sum = 0.0, lo = vals[0], hi = vals[0], dev_sum = 0.0, dev_max = 0.0;
  for (double v : vals) {
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    const double d = std::abs(v - level);
    dev_sum += d;
    dev_max = std::max(dev_max, d);
  }
  const double mean = sum / static_cast<double>(vals.size());
  j["mean"] = mean;
  j["min"] = lo;
  j["max"] = hi;
  j["level"] = level;
  j["mean_abs_dev"] = dev_sum / static_cast<double>(vals.size());
  j["max_abs_dev"] = dev_max;
  j["mean_abs_dev_over_eps"] = dev_sum / static_cast<double>(vals.size()) / eps_n;
  j["max_abs_dev_over_eps"] = dev_max / eps_n;
  return j;
}

nlohmann::json window_with_warnings(const ExperimentConfig& c, int T,
                                    std::vector<std::string>& warnings) {
  const WindowReport w = check_window({c.n, c.p0, c.p1, 0}, c.rho, std::max(T, 1));
  if (!w.rho_ok) warnings.push_back("contrast window violated: p1/p0 or p0 outside [rho, 1-rho]");
  if (!w.mdt_ok) warnings.push_back("moderately dense window not comfortably met (n*pbar^3/log n < 2)");
  if (!w.mdt_T_ok) warnings.push_back("finite-horizon window not comfortably met (n*pbar^(2T+1)/log n < 2)");
  nlohmann::json j;
  j["p_bar"] = w.p_bar;
  j["ratio_p1_p0"] = w.ratio_p1_p0;
  j["p0_cap"] = w.p0_cap;
  j["rho_ok"] = w.rho_ok;
  j["mdt_ratio"] = w.mdt_ratio;
  j["mdt_ok"] = w.mdt_ok;
  j["mdt_T_ratio"] = w.mdt_T_ratio;
  j["mdt_T_ok"] = w.mdt_T_ok;
  j["eps_n"] = w.eps_n;
  j["eta_n"] = w.eta_n;
  j["eta_nT"] = w.eta_nT;
  j["d0"] = w.d0;
  j["d1"] = w.d1;
  return j;
}

nlohmann::json run_concentration(const ExperimentConfig& c);
nlohmann::json run_one_step(const ExperimentConfig& c);
nlohmann::json run_iterate(const ExperimentConfig& c);

nlohmann::json run_concentration(const ExperimentConfig& c) {
  std::vector<std::string> warnings;
  nlohmann::json report;
  report["kind"] = "concentration";
  report["config"] = experiment_config_to_json(c);
  report["window"] = window_with_warnings(c, 1, warnings);
  const double eps_n = report["window"]["eps_n"].get<double>();

  const auto [w_in, w_out] = population_levels<double>(c.n, c.p0, c.p1);
  report["levels"] = {{"w_in_n", w_in}, {"w_out_n", w_out}};
  const double band = c.thresholds.conc_band_factor * (w_in - w_out);

  double worst_within_dev = 0.0, worst_cross_dev = 0.0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_min_kappa = std::numeric_limits<double>::infinity();
  bool have_cross = false;

  nlohmann::json seed_reports = nlohmann::json::array();
  for (std::uint64_t seed : c.seeds) {
    auto [g, labels] = sample_sbm({c.n, c.p0, c.p1, seed});
    const std::vector<Index> ids =
        sample_edge_ids(g.num_edges(), c.subsample_edges, seed, kSaltConcentration);
    const Eigen::VectorXd kap = curvature_on_edges(g, unit_weights(g), ids, c.threads);

    std::vector<double> within, cross;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const auto [u, v] = g.edge_endpoints(ids[k]);
      (labels.same_block(u, v) ? within : cross).push_back(kap[static_cast<Index>(k)]);
    }

    nlohmann::json sj;
    sj["seed"] = seed;
    sj["n_edges"] = g.num_edges();
    sj["n_sampled"] = ids.size();
    sj["within"] = type_stats(within, w_in, eps_n);
    sj["cross"] = type_stats(cross, w_out, eps_n);
    sj["min_kappa"] = kap.size() > 0 ? kap.minCoeff() : 0.0;

    const double mw = within.empty() ? 0.0 : sj["within"]["mean"].get<double>();
    if (!within.empty())
      worst_within_dev = std::max(worst_within_dev, std::abs(mw - w_in));
    if (!cross.empty()) {
      have_cross = true;
      const double mc = sj["cross"]["mean"].get<double>();
      worst_cross_dev = std::max(worst_cross_dev, std::abs(mc - w_out));
      worst_margin = std::min(worst_margin, mw - mc);
    }
    worst_min_kappa = std::min(worst_min_kappa, sj["min_kappa"].get<double>());
    seed_reports.push_back(std::move(sj));
  }
  report["seeds"] = std::move(seed_reports);

  RuleSet rules;
  rules.add("within_mean_near_level(band=factor*(w_in-w_out))", band, worst_within_dev,
            worst_within_dev <= band);
  if (have_cross) {
    rules.add("cross_mean_near_level(band=factor*(w_in-w_out))", band, worst_cross_dev,
              worst_cross_dev <= band);
    rules.add("within_mean_gt_cross_mean(min margin)", 0.0, worst_margin, worst_margin > 0.0);
  }
  rules.add("min_sampled_kappa_positive", 0.0, worst_min_kappa, worst_min_kappa > 0.0);
  report["acceptance"] = rules.finish();
  report["warnings"] = warnings;
  return report;
}

nlohmann::json run_one_step(const ExperimentConfig& c) {
  std::vector<std::string> warnings;
  nlohmann::json report;
  report["kind"] = "one-step";
  report["config"] = experiment_config_to_json(c);
  report["window"] = window_with_warnings(c, 1, warnings);

  const ContrastSummary cs = contrast_summary(c.n, c.p0, c.p1);
  report["mean_field"] = {{"r", cs.r},           {"r_n0", cs.r_n0},
                          {"r_curv", cs.r_curv}, {"mf_gain", cs.mf_gain},
                          {"w_in_pop", cs.w_in_pop}, {"w_out_pop", cs.w_out_pop}};

  auto [lap0_pop, spec0_pop] = population_laplacian(c.n, c.p0, c.p1, 0);
  auto [lap1_pop, spec1_pop] = population_laplacian(c.n, c.p0, c.p1, 1);
  report["population"] = {{"gap0_pop", spec0_pop.gap}, {"gap1_pop", spec1_pop.gap}};

  bool all_gap_improved = true, all_err_ok = true, all_tan_ok = true;
  double worst_err = 0.0, min_w1 = std::numeric_limits<double>::infinity();
  double gain_sum = 0.0;

  nlohmann::json seed_reports = nlohmann::json::array();
  for (std::uint64_t seed : c.seeds) {
    auto [g, labels] = sample_sbm({c.n, c.p0, c.p1, seed});
    const EdgeWeights w0 = unit_weights(g);
    const EdgeWeights w1 = curvature_all_edges(g, w0, c.threads);

    const NormalizedLaplacian lap0 = normalized_laplacian(g, w0);
    const NormalizedLaplacian lap1 = normalized_laplacian(g, w1);
    const SpectralSummary s0 = eigs_bottom(lap0, 3);
    const SpectralSummary s1 = eigs_bottom(lap1, 3);
    const double delta0 = operator_norm_sym(lap0.matrix - lap0_pop.matrix);
    const double delta1 = operator_norm_sym(lap1.matrix - lap1_pop.matrix);

    const ClusteringResult c0 = sign_cluster(s0.v2, &labels);
    const ClusteringResult c1 = sign_cluster(s1.v2, &labels);

    const double gain = s1.gap - s0.gap;
    gain_sum += gain;
    min_w1 = std::min(min_w1, w1.minCoeff());

    nlohmann::json sj;
    sj["seed"] = seed;
    sj["gap0"] = s0.gap;
    sj["gap1"] = s1.gap;
    sj["gain"] = gain;
    sj["delta0"] = delta0;
    sj["delta1"] = delta1;
    sj["delta0_over_gap0_pop"] = delta0 / spec0_pop.gap;
    sj["delta1_over_gap1_pop"] = delta1 / spec1_pop.gap;
    sj["err0"] = *c0.err;
    sj["err1"] = *c1.err;
    sj["tan2_0"] = *c0.tan_angle_sq;
    sj["tan2_1"] = *c1.tan_angle_sq;
    sj["min_w1"] = w1.minCoeff();
    seed_reports.push_back(std::move(sj));

    all_gap_improved = all_gap_improved && (gain > 0.0);
    worst_err = std::max({worst_err, *c0.err, *c1.err});
    all_err_ok = all_err_ok && *c0.err <= c.thresholds.err_max &&
                 *c1.err <= c.thresholds.err_max;
    all_tan_ok = all_tan_ok && *c0.err <= *c0.tan_angle_sq + 1e-9 &&
                 *c1.err <= *c1.tan_angle_sq + 1e-9;
  }
  report["seeds"] = std::move(seed_reports);

  const double mean_gain = gain_sum / static_cast<double>(c.seeds.size());
  const double gain_ratio = mean_gain / cs.mf_gain;
  report["aggregate"] = {{"mean_gain", mean_gain},
                         {"predicted_gain", cs.mf_gain},
                         {"gain_ratio", gain_ratio},
                         {"min_w1", min_w1}};

  RuleSet rules;
  rules.add("gap_improves_every_seed", 0.0, all_gap_improved ? 1.0 : 0.0, all_gap_improved);
  rules.add("mean_gain_ratio_lower", c.thresholds.gain_lo, gain_ratio,
            gain_ratio >= c.thresholds.gain_lo);
  rules.add("mean_gain_ratio_upper", c.thresholds.gain_hi, gain_ratio,
            gain_ratio <= c.thresholds.gain_hi);
  rules.add("err_below_max_every_seed", c.thresholds.err_max, worst_err, all_err_ok);
  rules.add("err_le_tan2_every_seed", 0.0, all_tan_ok ? 1.0 : 0.0, all_tan_ok);
  report["acceptance"] = rules.finish();
  report["warnings"] = warnings;
  return report;
}

nlohmann::json run_iterate(const ExperimentConfig& c) {
  std::vector<std::string> warnings;
  if (c.T < 1) throw std::invalid_argument("iterate experiment requires T >= 1");

  const double pbar = 0.5 * (c.p0 + c.p1);
  const double mdt_T_raw = static_cast<double>(c.n) *
                           std::pow(pbar, 2.0 * c.T + 1.0) / std::log(static_cast<double>(c.n));
  if (mdt_T_raw < 1.0 && !c.force)
    throw std::invalid_argument(
        "iterate: configuration lies outside the MDT(T) window (n*pbar^(2T+1)/log n = " +
        std::to_string(mdt_T_raw) + " < 1); set force=true to run anyway");

  nlohmann::json report;
  report["kind"] = "iterate";
  report["config"] = experiment_config_to_json(c);
  report["window"] = window_with_warnings(c, c.T, warnings);
  const double eps_n = report["window"]["eps_n"].get<double>();

  const MeanFieldTrajectory traj = benchmark_trajectory(c.n, c.p0, c.p1, c.T);
  nlohmann::json tj = nlohmann::json::array();
  for (int t = 0; t <= c.T; ++t)
    tj.push_back({{"t", t},
                  {"w_in", traj.w_in[static_cast<std::size_t>(t)]},
                  {"w_out", traj.w_out[static_cast<std::size_t>(t)]},
                  {"s", traj.s[static_cast<std::size_t>(t)]},
                  {"delta", traj.delta[static_cast<std::size_t>(t)]}});
  report["trajectory"] = std::move(tj);
  report["s_star"] = traj.s_star;

  const double delta1_cap = c.thresholds.delta1_factor * eps_n;
  const double delta2_cap = c.thresholds.delta2_factor * eps_n / pbar;

  bool all_delta0 = true, all_delta1 = true, all_delta2 = true;
  bool all_gap_monotone = true, all_hall = true, all_gap_chain = true;
  double worst_delta1 = 0.0, worst_delta2 = 0.0, worst_gap_drop = 0.0, worst_hall = 1.0;

  nlohmann::json seed_reports = nlohmann::json::array();
  for (std::uint64_t seed : c.seeds) {
    auto [g, labels] = sample_sbm({c.n, c.p0, c.p1, seed});
    const std::vector<IterateState> states = ricci_iterate(g, c.T, c.threads);
    std::vector<EdgeWeights> bench;
    for (int t = 0; t <= c.T; ++t) bench.push_back(benchmark_weights(g, labels, traj, t));
    const std::vector<TrackingRecord> records = tracking_error(g, states, bench, traj.delta);

    nlohmann::json rj = nlohmann::json::array();
    for (const auto& r : records) {
      rj.push_back({{"t", r.t},
                    {"delta_max", r.delta_max},
                    {"lap_dev", r.lap_dev},
                    {"gap_emp", r.gap_emp},
                    {"gap_star", r.gap_star},
                    {"gap_pop", r.gap_pop},
                    {"delta_over_rate", r.t == 0 ? 0.0
                                                 : r.delta_max /
                                                       (eps_n / std::pow(pbar, r.t - 1))}});
      const double chain = std::abs(r.gap_emp - r.gap_star);
      if (chain > 2.0 * r.lap_dev + 1e-9) all_gap_chain = false;
    }

    // Good-event diagnostic: type-split exclusive neighborhoods must carry a
    // matching saturating the smaller side, on both the in- and out-type pair.
    const std::vector<Index> hall_ids =
        sample_edge_ids(g.num_edges(), c.thresholds.hall_sample, seed, kSaltHall);
    Index hall_pass = 0;
    for (Index e : hall_ids) {
      const auto [x, y] = g.edge_endpoints(e);
      const PairStats ps = pair_stats(g, x, y, &labels);
      const bool ok_in = hall_matching_check(g, ps.u_in, ps.v_in).saturating;
      const bool ok_out = hall_matching_check(g, ps.u_out, ps.v_out).saturating;
      if (ok_in && ok_out) ++hall_pass;
    }
    const double hall_rate =
        hall_ids.empty() ? 1.0 : static_cast<double>(hall_pass) / hall_ids.size();

    nlohmann::json sj;
    sj["seed"] = seed;
    sj["tracking"] = std::move(rj);
    sj["hall_checked"] = hall_ids.size();
    sj["hall_pass_rate"] = hall_rate;
    sj["min_weight_per_t"] = nlohmann::json::array();
    for (const auto& st : states) sj["min_weight_per_t"].push_back(st.min_weight);
    seed_reports.push_back(std::move(sj));

    all_delta0 = all_delta0 && records[0].delta_max == 0.0;
    if (c.T >= 1) {
      worst_delta1 = std::max(worst_delta1, records[1].delta_max);
      all_delta1 = all_delta1 && records[1].delta_max <= delta1_cap;
    }
    if (c.T >= 2) {
      worst_delta2 = std::max(worst_delta2, records[2].delta_max);
      all_delta2 = all_delta2 && records[2].delta_max <= delta2_cap;
      const double drop = records[1].gap_emp - records[2].gap_emp;
      worst_gap_drop = std::max(worst_gap_drop, drop);
      all_gap_monotone = all_gap_monotone && drop <= c.thresholds.gap_drop_tol;
    }
    worst_hall = std::min(worst_hall, hall_rate);
    all_hall = all_hall && hall_rate >= c.thresholds.hall_pass_rate;
  }
  report["seeds"] = std::move(seed_reports);

  RuleSet rules;
  rules.add("delta0_exactly_zero", 0.0, all_delta0 ? 0.0 : 1.0, all_delta0);
  rules.add("delta1_le_cap(factor*eps_n)", delta1_cap, worst_delta1, all_delta1);
  if (c.T >= 2) {
    rules.add("delta2_le_cap(factor*eps_n/pbar)", delta2_cap, worst_delta2, all_delta2);
    rules.add("gap_monotone_up_to_tol", c.thresholds.gap_drop_tol, worst_gap_drop,
              all_gap_monotone);
  }
  rules.add("hall_pass_rate", c.thresholds.hall_pass_rate, worst_hall, all_hall);
  rules.add("gap_chain_weyl_consistency", 0.0, all_gap_chain ? 1.0 : 0.0, all_gap_chain);
  report["acceptance"] = rules.finish();
  report["warnings"] = warnings;
  return report;
}

}  // namespace

std::vector<IterateState> ricci_iterate(const Graph& g, int T, int num_threads) {
  if (T < 1) throw std::invalid_argument("ricci_iterate requires T >= 1");

  auto make_state = [&g](int t, EdgeWeights w) {
    IterateState st;
    st.t = t;
    st.min_weight = w.size() > 0 ? w.minCoeff() : 0.0;
    st.max_weight = w.size() > 0 ? w.maxCoeff() : 0.0;
    const Eigen::VectorXd d = weighted_degrees(g, w);
    st.min_wdeg = d.size() > 0 ? d.minCoeff() : 0.0;
    st.weights = std::move(w);
    return st;
  };

  std::vector<IterateState> states;
  states.push_back(make_state(0, unit_weights(g)));
  if (!(states[0].min_wdeg > 0.0))
    throw std::runtime_error("ricci_iterate: isolated vertex at step 0");

  for (int t = 1; t <= T; ++t) {
    EdgeWeights next = curvature_all_edges(g, states.back().weights, num_threads);
    IterateState st = make_state(t, std::move(next));
    if (!(st.min_weight > 0.0)) {
      Index bad = 0;
      for (Index e = 0; e < g.num_edges(); ++e)
        if (st.weights[e] <= 0.0) {
          bad = e;
          break;
        }
      const auto [u, v] = g.edge_endpoints(bad);
      throw std::runtime_error("ricci_iterate: nonpositive curvature weight at step " +
                               std::to_string(t) + " on edge {" + std::to_string(u) + "," +
                               std::to_string(v) + "} (outside the positivity event)");
    }
    if (!(st.min_wdeg > 0.0)) {
      const Eigen::VectorXd d = weighted_degrees(g, st.weights);
      Index bad = 0;
      for (Index v = 0; v < g.num_vertices(); ++v)
        if (!(d[v] > 0.0)) {
          bad = v;
          break;
        }
      throw std::runtime_error("ricci_iterate: nonpositive weighted degree at step " +
                               std::to_string(t) + " at vertex " + std::to_string(bad));
    }
    states.push_back(std::move(st));
  }
  return states;
}

EdgeWeights benchmark_weights(const Graph& g, const Labels& labels,
                              const MeanFieldTrajectory& trajectory, int t) {
  if (labels.size() != g.num_vertices())
    throw std::invalid_argument("benchmark_weights: labels size mismatch");
  if (t < 0 || t > trajectory.horizon())
    throw std::invalid_argument("benchmark_weights: step t outside trajectory");
  const double a = trajectory.w_in[static_cast<std::size_t>(t)];
  const double b = trajectory.w_out[static_cast<std::size_t>(t)];
  EdgeWeights w(g.num_edges());
  for (Index e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edge_endpoints(e);
    w[e] = labels.same_block(u, v) ? a : b;
  }
  return w;
}

std::vector<TrackingRecord> tracking_error(const Graph& g,
                                           const std::vector<IterateState>& iterates,
                                           const std::vector<EdgeWeights>& benchmarks,
                                           const std::vector<double>& gap_pop) {
  if (iterates.size() != benchmarks.size() || iterates.size() > gap_pop.size())
    throw std::invalid_argument("tracking_error: misaligned sequences");
  std::vector<TrackingRecord> records;
  for (std::size_t t = 0; t < iterates.size(); ++t) {
    if (benchmarks[t].size() != g.num_edges() || iterates[t].weights.size() != g.num_edges())
      throw std::invalid_argument("tracking_error: weights not aligned to edge index");
    TrackingRecord r;
    r.t = static_cast<int>(t);
    r.delta_max = (iterates[t].weights - benchmarks[t]).cwiseAbs().maxCoeff();
    const NormalizedLaplacian lap_emp = normalized_laplacian(g, iterates[t].weights);
    const NormalizedLaplacian lap_star = normalized_laplacian(g, benchmarks[t]);
    r.lap_dev = operator_norm_sym(lap_emp.matrix - lap_star.matrix);
    r.gap_emp = eigs_bottom(lap_emp, 3).gap;
    r.gap_star = eigs_bottom(lap_star, 3).gap;
    r.gap_pop = gap_pop[t];
    records.push_back(r);
  }
  return records;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.n = j.at("n").get<Index>();
  c.p0 = j.at("p0").get<double>();
  c.p1 = j.at("p1").get<double>();
  for (const auto& s : j.at("seeds")) c.seeds.push_back(s.get<std::uint64_t>());
  if (c.seeds.empty()) throw std::invalid_argument("config: seeds must be nonempty");
  c.T = j.value("T", 1);
  c.rho = j.value("rho", 0.1);
  c.subsample_edges = j.value("subsample_edges", Index{2000});
  c.force = j.value("force", false);
  if (j.contains("thresholds")) {
    const auto& t = j.at("thresholds");
    c.thresholds.conc_band_factor = t.value("conc_band_factor", c.thresholds.conc_band_factor);
    c.thresholds.err_max = t.value("err_max", c.thresholds.err_max);
    c.thresholds.gain_lo = t.value("gain_lo", c.thresholds.gain_lo);
    c.thresholds.gain_hi = t.value("gain_hi", c.thresholds.gain_hi);
    c.thresholds.delta1_factor = t.value("delta1_factor", c.thresholds.delta1_factor);
    c.thresholds.delta2_factor = t.value("delta2_factor", c.thresholds.delta2_factor);
    c.thresholds.gap_drop_tol = t.value("gap_drop_tol", c.thresholds.gap_drop_tol);
    c.thresholds.hall_sample = t.value("hall_sample", c.thresholds.hall_sample);
    c.thresholds.hall_pass_rate = t.value("hall_pass_rate", c.thresholds.hall_pass_rate);
  }
  return c;
}

nlohmann::json experiment_config_to_json(const ExperimentConfig& c) {
  return nlohmann::json{
      {"n", c.n},
      {"p0", c.p0},
      {"p1", c.p1},
      {"seeds", c.seeds},
      {"T", c.T},
      {"rho", c.rho},
      {"subsample_edges", c.subsample_edges},
      {"force", c.force},
      {"thresholds",
       {{"conc_band_factor", c.thresholds.conc_band_factor},
        {"err_max", c.thresholds.err_max},
        {"gain_lo", c.thresholds.gain_lo},
        {"gain_hi", c.thresholds.gain_hi},
        {"delta1_factor", c.thresholds.delta1_factor},
        {"delta2_factor", c.thresholds.delta2_factor},
        {"gap_drop_tol", c.thresholds.gap_drop_tol},
        {"hall_sample", c.thresholds.hall_sample},
        {"hall_pass_rate", c.thresholds.hall_pass_rate}}}};
}

nlohmann::json run_experiment(const std::string& kind, const ExperimentConfig& config) {
  if (kind == "concentration") return run_concentration(config);
  if (kind == "one-step") return run_one_step(config);
  if (kind == "iterate") return run_iterate(config);
  throw std::invalid_argument("unknown experiment kind: " + kind);
}

bool report_all_passed(const nlohmann::json& report) {
  return report.at("acceptance").at("all_passed").get<bool>();
}

}  // namespace ricci

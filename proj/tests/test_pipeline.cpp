#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ricci/io.hpp"
#include "ricci/pipeline.hpp"

using namespace ricci;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "ricci_pipeline_test";
  std::filesystem::create_directories(dir);
  return dir;
}

ExperimentConfig small_config(Index n, double p0, double p1, std::vector<std::uint64_t> seeds) {
  ExperimentConfig c;
  c.n = n;
  c.p0 = p0;
  c.p1 = p1;
  c.seeds = std::move(seeds);
  c.T = 2;
  c.rho = 0.2;
  c.subsample_edges = 150;
  c.thresholds.hall_sample = 40;
  return c;
}

}  // namespace

TEST_CASE("ricci_iterate: triangle is a fixed point after one step") {
  const Graph tri = Graph::build(3, {{0, 1}, {1, 2}, {0, 2}});
  const auto states = ricci_iterate(tri, 2);
  REQUIRE(states.size() == 3);
  for (Index e = 0; e < 3; ++e) {
    CHECK(states[1].weights[e] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(states[2].weights[e] == doctest::Approx(1.5).epsilon(1e-12));
  }
  CHECK(states[0].min_weight == 1.0);
  CHECK(states[1].min_wdeg == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("ricci_iterate: K4 single step gives 4/3 everywhere") {
  const Graph k4 = Graph::build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  const auto states = ricci_iterate(k4, 1);
  for (Index e = 0; e < 6; ++e)
    CHECK(states[1].weights[e] == doctest::Approx(4.0 / 3).epsilon(1e-12));
}

TEST_CASE("ricci_iterate: aborts loudly when a weight leaves the positive cone") {
  // The middle edge of P4 has zero curvature, so step 1 must abort.
  const Graph p4 = Graph::build(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK_THROWS_WITH_AS(ricci_iterate(p4, 1), doctest::Contains("step 1"),
                       std::runtime_error);
}

TEST_CASE("ricci_iterate: SBM run stays strictly positive") {
  auto [g, labels] = sample_sbm({60, 0.7, 0.35, 5});
  const auto states = ricci_iterate(g, 2);
  for (const auto& st : states) {
    CHECK(st.min_weight > 0.0);
    CHECK(st.min_wdeg > 0.0);
    CHECK(st.weights.size() == g.num_edges());  // support never changes
  }
}

TEST_CASE("benchmark_weights: unit at t=0, two-level afterwards") {
  auto [g, labels] = sample_sbm({20, 0.8, 0.3, 11});
  const MeanFieldTrajectory tr = benchmark_trajectory(20, 0.8, 0.3, 2);

  const EdgeWeights w0 = benchmark_weights(g, labels, tr, 0);
  CHECK(w0.minCoeff() == 1.0);
  CHECK(w0.maxCoeff() == 1.0);

  const EdgeWeights w1 = benchmark_weights(g, labels, tr, 1);
  for (Index e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edge_endpoints(e);
    CHECK(w1[e] == (labels.same_block(u, v) ? tr.w_in[1] : tr.w_out[1]));
  }

  CHECK_THROWS_AS(benchmark_weights(g, labels, tr, 3), std::invalid_argument);

  // All-within graph: every edge gets w_in.
  const Graph two = Graph::build(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  const Labels comp = Labels::balanced(3);
  const EdgeWeights wb = benchmark_weights(two, comp, tr, 1);
  for (Index e = 0; e < 6; ++e) CHECK(wb[e] == tr.w_in[1]);
}

TEST_CASE("tracking_error: zero at t=0 and Weyl-consistent gap chain") {
  auto [g, labels] = sample_sbm({40, 0.7, 0.3, 3});
  const MeanFieldTrajectory tr = benchmark_trajectory(40, 0.7, 0.3, 1);
  const auto states = ricci_iterate(g, 1);
  std::vector<EdgeWeights> bench{benchmark_weights(g, labels, tr, 0),
                                 benchmark_weights(g, labels, tr, 1)};
  const auto records = tracking_error(g, states, bench, tr.delta);
  REQUIRE(records.size() == 2);
  CHECK(records[0].delta_max == 0.0);
  CHECK(records[0].lap_dev <= 1e-12);
  for (const auto& r : records) {
    CHECK(std::abs(r.gap_emp - r.gap_star) <= 2.0 * r.lap_dev + 1e-9);
    CHECK(r.gap_pop == tr.delta[static_cast<std::size_t>(r.t)]);
  }

  std::vector<EdgeWeights> misaligned{bench[0]};
  CHECK_THROWS_AS(tracking_error(g, states, misaligned, tr.delta), std::invalid_argument);
}

TEST_CASE("graph JSON and weights CSV round-trips") {
  const auto dir = temp_dir();
  auto [g, labels] = sample_sbm({12, 0.6, 0.3, 8});

  const auto gpath = (dir / "graph.json").string();
  save_graph_json(gpath, g, &labels);
  auto [g2, labels2] = load_graph_json(gpath);
  CHECK(g2.num_vertices() == g.num_vertices());
  CHECK(g2.edges() == g.edges());
  REQUIRE(labels2.has_value());
  CHECK(labels2->block == labels.block);

  const EdgeWeights w = 1.5 * unit_weights(g);
  const auto wpath = (dir / "weights.csv").string();
  save_weights_csv(wpath, g, w);
  const EdgeWeights w2 = load_weights_csv(wpath, g);
  CHECK((w - w2).cwiseAbs().maxCoeff() == 0.0);

  const auto cpath = (dir / "kappa.csv").string();
  save_curvature_csv(cpath, g, w, &labels);
  std::ifstream in(cpath);
  std::string header;
  std::getline(in, header);
  CHECK(header == "edge_index,u,v,kappa,within_block");
}

TEST_CASE("debug serialization: transport result, window report, spectral summary") {
  const auto mu = SparseMeasure::from_atoms({{0, 1.0}});
  const auto nu = SparseMeasure::from_atoms({{2, 1.0}});
  DistanceFn dist = [](Index a, Index b) -> std::optional<int> { return std::abs(a - b); };
  const nlohmann::json tj = to_json(wasserstein1(mu, nu, dist, true));
  CHECK(tj.at("cost").get<double>() == doctest::Approx(2.0));
  CHECK(tj.at("plan").size() == 1);
  CHECK(tj.contains("dual_potentials"));

  const nlohmann::json wj = to_json(check_window({300, 0.5, 0.25, 0}, 0.2, 1));
  CHECK(wj.at("rho_ok").get<bool>());
  CHECK(wj.at("eps_n").get<double>() == doctest::Approx(0.22517).epsilon(1e-4));

  const Graph k4 = Graph::build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  const nlohmann::json sj = to_json(eigs_bottom(normalized_laplacian(k4, unit_weights(k4)), 3));
  REQUIRE(sj.at("lambda").size() == 3);  // printed with 12 significant digits
  CHECK(sj.at("lambda").at(1).get<std::string>().substr(0, 7) == "1.33333");

  const auto dir = temp_dir();
  const auto tpath = (dir / "trajectory.csv").string();
  save_trajectory_csv(tpath, benchmark_trajectory(100, 0.5, 0.25, 3));
  std::ifstream in(tpath);
  std::string header, row0;
  std::getline(in, header);
  std::getline(in, row0);
  CHECK(header == "t,w_in,w_out,s,delta");
  CHECK(row0.rfind("0,1,1,1,", 0) == 0);
}

TEST_CASE("experiment config JSON: defaults and round-trip") {
  nlohmann::json j = {{"n", 80}, {"p0", 0.5}, {"p1", 0.25}, {"seeds", {1, 2}}};
  const ExperimentConfig c = experiment_config_from_json(j);
  CHECK(c.T == 1);
  CHECK(c.rho == 0.1);
  CHECK(c.subsample_edges == 2000);
  CHECK(c.thresholds.err_max == 0.02);
  CHECK(c.thresholds.delta1_factor == 3.0);
  CHECK(!c.force);

  const nlohmann::json echoed = experiment_config_to_json(c);
  const ExperimentConfig c2 = experiment_config_from_json(echoed);
  CHECK(experiment_config_to_json(c2) == echoed);

  nlohmann::json no_seeds = {{"n", 80}, {"p0", 0.5}, {"p1", 0.25}, {"seeds", nlohmann::json::array()}};
  CHECK_THROWS_AS(experiment_config_from_json(no_seeds), std::invalid_argument);
}

TEST_CASE("run_experiment: concentration report structure at small scale") {
  const auto report = run_experiment("concentration", small_config(50, 0.6, 0.3, {1, 2}));
  CHECK(report.at("kind") == "concentration");
  CHECK(report.at("seeds").size() == 2);
  CHECK(report.at("levels").contains("w_in_n"));
  for (const auto& sj : report.at("seeds")) {
    CHECK(sj.at("within").at("count").get<int>() > 0);
    CHECK(sj.at("cross").at("count").get<int>() > 0);
    CHECK(sj.at("min_kappa").get<double>() > 0.0);
  }
  CHECK(report.at("acceptance").contains("all_passed"));
  CHECK(report.at("config").at("thresholds").at("conc_band_factor") == 0.5);
}

TEST_CASE("run_experiment: one-step report carries gaps, errors, and angles") {
  auto cfg = small_config(50, 0.7, 0.3, {4});
  const auto report = run_experiment("one-step", cfg);
  const auto& sj = report.at("seeds").at(0);
  CHECK(sj.at("gap1").get<double>() > 0.0);
  CHECK(sj.at("err0").get<double>() >= 0.0);
  CHECK(sj.at("err0").get<double>() <= sj.at("tan2_0").get<double>() + 1e-9);
  CHECK(sj.at("err1").get<double>() <= sj.at("tan2_1").get<double>() + 1e-9);
  CHECK(sj.at("min_w1").get<double>() > 0.0);
  CHECK(report.at("population").at("gap1_pop").get<double>() >
        report.at("population").at("gap0_pop").get<double>());
}

TEST_CASE("run_experiment: iterate tracks benchmarks and runs the Hall diagnostic") {
  auto cfg = small_config(60, 0.8, 0.4, {6});  // inside MDT(T=2) at desk scale
  const auto report = run_experiment("iterate", cfg);
  const auto& sj = report.at("seeds").at(0);
  const auto& tracking = sj.at("tracking");
  REQUIRE(tracking.size() == 3);
  CHECK(tracking.at(0).at("delta_max").get<double>() == 0.0);
  CHECK(sj.at("hall_checked").get<int>() == 40);
  CHECK(sj.at("hall_pass_rate").get<double>() >= 0.0);
  CHECK(report.at("trajectory").size() == 3);

  // Unknown kind is rejected.
  CHECK_THROWS_AS(run_experiment("volume", cfg), std::invalid_argument);
}

TEST_CASE("run_experiment: iterate refuses configs far outside MDT(T) unless forced") {
  auto cfg = small_config(40, 0.25, 0.15, {1});
  cfg.T = 3;  // n * pbar^7 / log n << 1
  CHECK_THROWS_WITH_AS(run_experiment("iterate", cfg), doctest::Contains("force"),
                       std::invalid_argument);
  cfg.force = true;
  cfg.thresholds.hall_sample = 10;
  // Forced runs may abort for math reasons (positivity loss) but not refuse.
  try {
    const auto rep = run_experiment("iterate", cfg);
    CHECK(rep.at("kind") == "iterate");
  } catch (const std::runtime_error&) {
    // acceptable: outside the window the positivity event may genuinely fail
  }
}

TEST_CASE("run_experiment: reports are bytewise reproducible across worker counts") {
  auto cfg = small_config(40, 0.6, 0.3, {9, 10});
  cfg.threads = 1;
  const std::string a = run_experiment("concentration", cfg).dump();
  cfg.threads = 3;
  const std::string b = run_experiment("concentration", cfg).dump();
  CHECK(a == b);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ricci/graph.hpp"
#include "support/oracles.hpp"

using namespace ricci;

TEST_CASE("build_graph: triangle and path") {
  const Graph tri = Graph::build(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(tri.num_edges() == 3);
  for (Index v = 0; v < 3; ++v) CHECK(tri.degree(v) == 2);

  const Graph p4 = Graph::build(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(p4.num_edges() == 3);
  CHECK(p4.degree(0) == 1);
  CHECK(p4.degree(1) == 2);
  CHECK(p4.degree(2) == 2);
  CHECK(p4.degree(3) == 1);
}

TEST_CASE("build_graph: rejects self-loops and bad vertices, dedups edges") {
  CHECK_THROWS_AS(Graph::build(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::build(3, {{0, 5}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::build(3, {{-1, 2}}), std::invalid_argument);

  const Graph g = Graph::build(3, {{1, 0}, {0, 1}, {2, 1}});
  CHECK(g.num_edges() == 2);
  CHECK(g.edge_endpoints(0) == std::pair<Index, Index>{0, 1});
  CHECK(g.edge_endpoints(1) == std::pair<Index, Index>{1, 2});
}

TEST_CASE("canonical edge index is lexicographic with O(1) lookup") {
  const Graph g = Graph::build(5, {{3, 4}, {0, 2}, {0, 1}, {1, 4}});
  CHECK(g.edge_index(0, 1) == 0);
  CHECK(g.edge_index(2, 0) == 1);
  CHECK(g.edge_index(1, 4) == 2);
  CHECK(g.edge_index(4, 3) == 3);
  CHECK(!g.edge_index(0, 4).has_value());
  CHECK(!g.edge_index(2, 2).has_value());
}

TEST_CASE("truncated_distance: examples") {
  const Graph tri = Graph::build(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(tri.truncated_distance(0, 1, 3) == 1);

  const Graph p4 = Graph::build(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(p4.truncated_distance(0, 3, 3) == 3);
  CHECK(!p4.truncated_distance(0, 3, 2).has_value());

  const Graph cut = Graph::build(4, {{0, 1}, {1, 2}});
  CHECK(!cut.truncated_distance(0, 3, 3).has_value());
}

TEST_CASE("truncated_distance matches Floyd-Warshall; symmetry and triangle inequality") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 4 + static_cast<Index>(rng() % 9);  // up to 12 vertices
    const Graph g = testing::erdos_renyi(n, 0.35, rng);
    const auto table = testing::all_pairs_distances(g);
    const int cap = 11;
    for (Index u = 0; u < n; ++u)
      for (Index v = 0; v < n; ++v) {
        const auto got = g.truncated_distance(u, v, cap);
        if (table[u][v] < 0 || table[u][v] > cap)
          CHECK(!got.has_value());
        else
          CHECK(got == table[u][v]);
        CHECK(g.truncated_distance(u, v, cap) == g.truncated_distance(v, u, cap));
      }
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k)
          if (table[i][j] >= 0 && table[j][k] >= 0 && table[i][k] >= 0)
            CHECK(table[i][k] <= table[i][j] + table[j][k]);
  }
}

TEST_CASE("pair_stats: triangle and P4") {
  const Graph tri = Graph::build(3, {{0, 1}, {1, 2}, {0, 2}});
  const PairStats s = pair_stats(tri, 0, 1);
  CHECK(s.codeg == 1);
  CHECK(s.exclusive_x.empty());
  CHECK(s.exclusive_y.empty());

  const Graph p4 = Graph::build(4, {{0, 1}, {1, 2}, {2, 3}});
  const PairStats t = pair_stats(p4, 1, 2);
  CHECK(t.codeg == 0);
  CHECK(t.exclusive_x == std::vector<Index>{0});
  CHECK(t.exclusive_y == std::vector<Index>{3});
}

TEST_CASE("pair_stats: two K3 blocks joined by a bridge, with labels") {
  // Vertices 0,1,2 and 3,4,5 are triangles; bridge (0,3).
  const Graph g =
      Graph::build(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {0, 3}});
  Labels labels = Labels::balanced(3);
  const PairStats s = pair_stats(g, 0, 3, &labels);
  CHECK(s.has_type_split);
  CHECK(s.u_in == std::vector<Index>{1, 2});
  CHECK(s.v_in == std::vector<Index>{4, 5});
  CHECK(s.u_out.empty());
  CHECK(s.v_out.empty());
  CHECK(s.imbalance_total == 0);
}

TEST_CASE("pair_stats: exclusive partition identity |U_x| + D_xy + 1 = D_x on edges") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 5 + static_cast<Index>(rng() % 16);
    const Graph g = testing::erdos_renyi(n, 0.4, rng);
    for (const auto& [x, y] : g.edges()) {
      const PairStats s = pair_stats(g, x, y);
      CHECK(static_cast<Index>(s.exclusive_x.size()) + s.codeg + 1 == s.deg_x);
      CHECK(static_cast<Index>(s.exclusive_y.size()) + s.codeg + 1 == s.deg_y);
      CHECK(s.imbalance_total == s.imbalance_in + s.imbalance_out);
    }
  }
}

TEST_CASE("hall_matching_check: examples") {
  const Graph g1 = Graph::build(2, {{0, 1}});
  const Index l1[] = {0}, r1[] = {1};
  CHECK(hall_matching_check(g1, l1, r1).saturating);

  const Graph g2 = Graph::build(3, {{0, 2}, {1, 2}});
  const Index l2[] = {0, 1}, r2[] = {2};
  const auto res2 = hall_matching_check(g2, l2, r2);
  CHECK(res2.saturating);  // smaller side is the right one
  CHECK(res2.matching.size() == 1);

  // Hall violated: both left vertices only see b1.
  const Graph g3 = Graph::build(4, {{0, 2}, {1, 2}});
  const Index l3[] = {0, 1}, r3[] = {2, 3};
  CHECK(!hall_matching_check(g3, l3, r3).saturating);
}

TEST_CASE("hall_matching_check: rejects overlapping sides, handles empty sides") {
  const Graph g = Graph::build(3, {{0, 1}, {1, 2}});
  const Index l[] = {0, 1}, r[] = {1, 2};
  CHECK_THROWS_AS(hall_matching_check(g, l, r), std::invalid_argument);
  CHECK(hall_matching_check(g, {}, {}).saturating);  // min side empty
}

TEST_CASE("hall_matching_check agrees with brute force on random bipartite graphs") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const Index nl = 1 + static_cast<Index>(rng() % 7);
    const Index nr = 1 + static_cast<Index>(rng() % 7);
    std::vector<std::pair<Index, Index>> edges;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Index i = 0; i < nl; ++i)
      for (Index j = 0; j < nr; ++j)
        if (unit(rng) < 0.35) edges.emplace_back(i, nl + j);
    const Graph g = Graph::build(nl + nr, edges);
    std::vector<Index> left, right;
    for (Index i = 0; i < nl; ++i) left.push_back(i);
    for (Index j = 0; j < nr; ++j) right.push_back(nl + j);

    const auto res = hall_matching_check(g, left, right);
    const int brute = testing::brute_force_max_matching(g, left, right);
    CHECK(static_cast<int>(res.matching.size()) <= brute);
    CHECK(res.saturating == (brute == std::min(nl, nr)));
    // The returned matching must be a valid matching along graph edges.
    std::vector<char> seen_l(static_cast<std::size_t>(nl + nr), 0),
        seen_r(static_cast<std::size_t>(nl + nr), 0);
    for (const auto& [a, b] : res.matching) {
      CHECK(g.has_edge(a, b));
      CHECK(!seen_l[static_cast<std::size_t>(a)]);
      CHECK(!seen_r[static_cast<std::size_t>(b)]);
      seen_l[static_cast<std::size_t>(a)] = 1;
      seen_r[static_cast<std::size_t>(b)] = 1;
    }
    if (res.saturating) CHECK(static_cast<int>(res.matching.size()) == std::min(nl, nr));
  }
}

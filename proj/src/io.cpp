#include "ricci/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ricci {

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.good()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

nlohmann::json graph_to_json(const Graph& g, const Labels* labels) {
  nlohmann::json j;
  j["n_vertices"] = g.num_vertices();
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  if (labels != nullptr) {
    if (labels->size() != g.num_vertices())
      throw std::invalid_argument("graph_to_json: labels size mismatch");
    j["labels"] = labels->block;
  }
  return j;
}

std::pair<Graph, std::optional<Labels>> graph_from_json(const nlohmann::json& j) {
  const Index n = j.at("n_vertices").get<Index>();
  std::vector<std::pair<Index, Index>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("graph_from_json: edge entries must be [u,v] pairs");
    edges.emplace_back(e[0].get<Index>(), e[1].get<Index>());
  }
  Graph g = Graph::build(n, edges);
  std::optional<Labels> labels;
  if (j.contains("labels")) {
    Labels l;
    for (const auto& b : j.at("labels")) {
      const int val = b.get<int>();
      if (val != 1 && val != 2)
        throw std::invalid_argument("graph_from_json: labels must be 1 or 2");
      l.block.push_back(static_cast<std::uint8_t>(val));
    }
    if (l.size() != n) throw std::invalid_argument("graph_from_json: labels size mismatch");
    labels = std::move(l);
  }
  return {std::move(g), std::move(labels)};
}

void save_graph_json(const std::string& path, const Graph& g, const Labels* labels) {
  atomic_write_file(path, graph_to_json(g, labels).dump(2) + "\n");
}

std::pair<Graph, std::optional<Labels>> load_graph_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path);
  nlohmann::json j;
  in >> j;
  return graph_from_json(j);
}

void save_weights_csv(const std::string& path, const Graph& g, const EdgeWeights& w) {
  if (w.size() != g.num_edges())
    throw std::invalid_argument("save_weights_csv: weights size mismatch");
  std::ostringstream out;
  out << "edge_index,u,v,weight\n";
  for (Index e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edge_endpoints(e);
    out << e << ',' << u << ',' << v << ',' << format_double(w[e]) << '\n';
  }
  atomic_write_file(path, out.str());
}

EdgeWeights load_weights_csv(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weights file " + path);
  EdgeWeights w = EdgeWeights::Constant(g.num_edges(), std::nan(""));
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("edge_index", 0) == 0) continue;  // header
    }
    Index e = 0, u = 0, v = 0;
    double val = 0.0;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%lf", &e, &u, &v, &val) != 4)
      throw std::runtime_error("malformed weights row: " + line);
    if (e < 0 || e >= g.num_edges())
      throw std::runtime_error("weights row has out-of-range edge index " + std::to_string(e));
    const auto [cu, cv] = g.edge_endpoints(e);
    if (cu != std::min(u, v) || cv != std::max(u, v))
      throw std::runtime_error("weights row " + std::to_string(e) +
                               " does not match the canonical edge index");
    w[e] = val;
  }
  for (Index e = 0; e < g.num_edges(); ++e)
    if (std::isnan(w[e]))
      throw std::runtime_error("weights file misses edge " + std::to_string(e));
  return w;
}

void save_curvature_csv(const std::string& path, const Graph& g, const EdgeWeights& kappa,
                        const Labels* labels) {
  if (kappa.size() != g.num_edges())
    throw std::invalid_argument("save_curvature_csv: size mismatch");
  std::ostringstream out;
  out << "edge_index,u,v,kappa,within_block\n";
  for (Index e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edge_endpoints(e);
    out << e << ',' << u << ',' << v << ',' << format_double(kappa[e]) << ',';
    if (labels == nullptr)
      out << "na";
    else
      out << (labels->same_block(u, v) ? 1 : 0);
    out << '\n';
  }
  atomic_write_file(path, out.str());
}

void save_trajectory_csv(const std::string& path, const MeanFieldTrajectory& tr) {
  std::ostringstream out;
  out << "t,w_in,w_out,s,delta\n";
  for (std::size_t t = 0; t < tr.w_in.size(); ++t)
    out << t << ',' << format_double(tr.w_in[t]) << ',' << format_double(tr.w_out[t]) << ','
        << format_double(tr.s[t]) << ',' << format_double(tr.delta[t]) << '\n';
  atomic_write_file(path, out.str());
}

nlohmann::json to_json(const TransportResult& r) {
  nlohmann::json j;
  j["cost"] = r.cost;
  nlohmann::json plan = nlohmann::json::array();
  for (const auto& [s, t, f] : r.plan) plan.push_back({{"src", s}, {"dst", t}, {"mass", f}});
  j["plan"] = std::move(plan);
  if (r.dual_potentials.has_value()) {
    nlohmann::json duals = nlohmann::json::object();
    for (const auto& [v, f] : *r.dual_potentials) duals[std::to_string(v)] = f;
    j["dual_potentials"] = std::move(duals);
  }
  return j;
}

nlohmann::json to_json(const WindowReport& w) {
  return nlohmann::json{
      {"p_bar", w.p_bar},           {"ratio_p1_p0", w.ratio_p1_p0},
      {"p0_cap", w.p0_cap},         {"rho_ok", w.rho_ok},
      {"mdt_ratio", w.mdt_ratio},   {"mdt_ok", w.mdt_ok},
      {"mdt_T_ratio", w.mdt_T_ratio}, {"mdt_T_ok", w.mdt_T_ok},
      {"eps_n", w.eps_n},           {"eta_n", w.eta_n},
      {"eta_nT", w.eta_nT},         {"d0", w.d0},
      {"d1", w.d1}};
}

nlohmann::json to_json(const SpectralSummary& s) {
  nlohmann::json j;
  nlohmann::json lambda = nlohmann::json::array();
  for (Index i = 0; i < s.lambda.size(); ++i) {
    std::ostringstream v;
    v.precision(12);
    v << s.lambda[i];
    lambda.push_back(v.str());
  }
  j["lambda"] = std::move(lambda);
  j["gap"] = s.gap;
  return j;
}

}  // namespace ricci

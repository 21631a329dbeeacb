#pragma once

#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "ricci/curvature.hpp"
#include "ricci/graph.hpp"
#include "ricci/meanfield.hpp"
#include "ricci/sbm.hpp"
#include "ricci/spectral.hpp"
#include "ricci/transport.hpp"

namespace ricci {

/// Writes content to path via a temporary file plus rename.
void atomic_write_file(const std::string& path, const std::string& content);

/// Shortest-round-trip-safe fixed formatting ("%.17g").
std::string format_double(double x);

// Graph JSON: {"n_vertices": int, "edges": [[u,v],...], "labels": [1|2,...]?}.
// Edge order in the file is arbitrary; the canonical index is recomputed.
nlohmann::json graph_to_json(const Graph& g, const Labels* labels);
std::pair<Graph, std::optional<Labels>> graph_from_json(const nlohmann::json& j);
void save_graph_json(const std::string& path, const Graph& g, const Labels* labels);
std::pair<Graph, std::optional<Labels>> load_graph_json(const std::string& path);

// Edge weight tables: CSV "edge_index,u,v,weight" aligned to the canonical
// edge index; loading validates the (u,v) columns against the graph.
void save_weights_csv(const std::string& path, const Graph& g, const EdgeWeights& w);
EdgeWeights load_weights_csv(const std::string& path, const Graph& g);

// Per-edge curvature dump: CSV "edge_index,u,v,kappa,within_block" with
// within_block in {0,1,na}.
void save_curvature_csv(const std::string& path, const Graph& g, const EdgeWeights& kappa,
                        const Labels* labels);

// Mean-field trajectory: CSV "t,w_in,w_out,s,delta".
void save_trajectory_csv(const std::string& path, const MeanFieldTrajectory& tr);

nlohmann::json to_json(const TransportResult& r);
nlohmann::json to_json(const WindowReport& w);
nlohmann::json to_json(const SpectralSummary& s);

}  // namespace ricci

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "gossip/graph.hpp"

namespace gossip {

// Plain text edge-list format:
//   n m
//   u v        (one line per edge, 0-based endpoints)
std::string to_edge_list_text(const Graph& g);
Graph graph_from_edge_list_text(const std::string& text);

// Structured form used by the experiment harness; carries coordinates
// for random geometric graphs so a layout can be reproduced exactly.
nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

// Format picked by extension: ".json" gets the structured form,
// anything else the plain edge list.
void save_graph(const Graph& g, const std::filesystem::path& path);

// Sniffs the content (leading '{' means structured form).
Graph load_graph(const std::filesystem::path& path);

}  // namespace gossip

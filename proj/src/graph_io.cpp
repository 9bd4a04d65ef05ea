#include "gossip/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "gossip/errors.hpp"

namespace gossip {

namespace {

void check_keys(const nlohmann::json& obj, const char* what,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        ok = true;
        break;
      }
    }
    if (!ok) throw IoError(std::string(what) + ": unknown key \"" + it.key() + "\"");
  }
}

}  // namespace

std::string to_edge_list_text(const Graph& g) {
  std::ostringstream out;
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) {
    out << e.u << ' ' << e.v << '\n';
  }
  return out.str();
}

Graph graph_from_edge_list_text(const std::string& text) {
  std::istringstream in(text);
  int n = 0;
  int m = 0;
  if (!(in >> n >> m)) {
    throw IoError("edge list: malformed header, expected \"n m\"");
  }
  if (m < 0) throw IoError("edge list: negative edge count");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    Edge e;
    if (!(in >> e.u >> e.v)) {
      throw IoError("edge list: expected " + std::to_string(m) + " edges, file ends after " +
                    std::to_string(k));
    }
    edges.push_back(e);
  }
  int extra = 0;
  if (in >> extra) {
    throw IoError("edge list: trailing tokens after the declared " + std::to_string(m) + " edges");
  }
  return Graph::from_edges(n, std::move(edges));
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["n"] = g.node_count();
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back({e.u, e.v});
  }
  j["edges"] = std::move(edges);
  if (g.coordinates()) {
    nlohmann::json coords = nlohmann::json::array();
    for (const Point2& p : *g.coordinates()) {
      coords.push_back({p.x, p.y});
    }
    j["coordinates"] = std::move(coords);
  }
  return j;
}

Graph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw IoError("graph document: expected a JSON object");
  check_keys(j, "graph document", {"schema_version", "n", "edges", "coordinates"});
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != 1) {
    throw IoError("graph document: schema_version must be 1");
  }
  if (!j.contains("n") || !j.contains("edges")) {
    throw IoError("graph document: \"n\" and \"edges\" are required");
  }
  const int n = j["n"].get<int>();
  std::vector<Edge> edges;
  for (const auto& pair : j["edges"]) {
    if (!pair.is_array() || pair.size() != 2) {
      throw IoError("graph document: each edge must be a [u, v] pair");
    }
    edges.push_back({pair[0].get<int>(), pair[1].get<int>()});
  }
  std::optional<std::vector<Point2>> coords;
  if (j.contains("coordinates")) {
    std::vector<Point2> pts;
    for (const auto& pt : j["coordinates"]) {
      if (!pt.is_array() || pt.size() != 2) {
        throw IoError("graph document: each coordinate must be an [x, y] pair");
      }
      pts.push_back({pt[0].get<double>(), pt[1].get<double>()});
    }
    coords = std::move(pts);
  }
  return Graph::from_edges(n, std::move(edges), std::move(coords));
}

void save_graph(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  if (path.extension() == ".json") {
    out << graph_to_json(g).dump(2) << '\n';
  } else {
    out << to_edge_list_text(g);
  }
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw IoError(path.string() + " is empty");
  if (text[first] == '{') {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw IoError(path.string() + ": invalid JSON");
    return graph_from_json(j);
  }
  return graph_from_edge_list_text(text);
}

}  // namespace gossip

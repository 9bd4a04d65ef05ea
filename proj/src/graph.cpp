#include "gossip/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <string>

#include <Eigen/Dense>

#include "gossip/errors.hpp"
#include "gossip/rng.hpp"

namespace gossip {

namespace {

bool is_connected(int n, const std::vector<Edge>& edges) {
  if (n <= 1) return true;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const Edge& e : edges) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int w : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++reached;
        frontier.push(w);
      }
    }
  }
  return reached == n;
}

}  // namespace

Graph Graph::from_edges(int node_count, std::vector<Edge> edges,
                        std::optional<std::vector<Point2>> coordinates) {
  if (node_count < 1) {
    throw InvalidTopologyError("graph needs at least one node, got " + std::to_string(node_count));
  }
  std::set<std::pair<int, int>> seen;
  for (Edge& e : edges) {
    if (e.u < 0 || e.u >= node_count || e.v < 0 || e.v >= node_count) {
      throw InvalidTopologyError("edge endpoint out of range: (" + std::to_string(e.u) + ", " +
                                 std::to_string(e.v) + ") with n = " + std::to_string(node_count));
    }
    if (e.u == e.v) {
      throw InvalidTopologyError("self-loop at node " + std::to_string(e.u));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    if (!seen.insert({e.u, e.v}).second) {
      throw InvalidTopologyError("duplicate edge (" + std::to_string(e.u) + ", " +
                                 std::to_string(e.v) + ")");
    }
  }
  if (coordinates && static_cast<int>(coordinates->size()) != node_count) {
    throw InvalidTopologyError("coordinate list length does not match node count");
  }
  if (!is_connected(node_count, edges)) {
    throw DisconnectedGraphError("graph with " + std::to_string(node_count) + " nodes and " +
                                 std::to_string(edges.size()) + " edges is not connected");
  }
  Graph g;
  g.n_ = node_count;
  g.edges_ = std::move(edges);
  g.degrees_.assign(static_cast<std::size_t>(node_count), 0);
  for (const Edge& e : g.edges_) {
    ++g.degrees_[static_cast<std::size_t>(e.u)];
    ++g.degrees_[static_cast<std::size_t>(e.v)];
  }
  g.coords_ = std::move(coordinates);
  return g;
}

const Edge& Graph::edge(int e) const {
  if (e < 0 || e >= edge_count()) {
    throw InvalidArgumentError("edge index " + std::to_string(e) + " out of range, m = " +
                               std::to_string(edge_count()));
  }
  return edges_[static_cast<std::size_t>(e)];
}

int Graph::min_degree() const {
  return *std::min_element(degrees_.begin(), degrees_.end());
}

Graph build_cycle(int n) {
  if (n < 3) {
    throw InvalidTopologyError("cycle graph needs n >= 3, got " + std::to_string(n));
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  edges.push_back({0, n - 1});
  return Graph::from_edges(n, std::move(edges));
}

double default_rgg_radius(int n) {
  if (n < 2) throw InvalidTopologyError("radius rule needs n >= 2");
  return std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n));
}

Graph build_random_geometric(int n, double radius, std::uint64_t seed) {
  if (n < 2) {
    throw InvalidTopologyError("random geometric graph needs n >= 2, got " + std::to_string(n));
  }
  if (!(radius > 0.0) || radius > std::sqrt(2.0)) {
    throw InvalidTopologyError("radius must lie in (0, sqrt(2)]");
  }
  constexpr int kMaxAttempts = 100;
  RngStream rng(seed);
  const double r2 = radius * radius;
  for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    std::vector<Point2> coords(static_cast<std::size_t>(n));
    for (Point2& p : coords) {
      p.x = rng.uniform01();
      p.y = rng.uniform01();
    }
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double dx = coords[static_cast<std::size_t>(i)].x - coords[static_cast<std::size_t>(j)].x;
        const double dy = coords[static_cast<std::size_t>(i)].y - coords[static_cast<std::size_t>(j)].y;
        if (dx * dx + dy * dy < r2) edges.push_back({i, j});
      }
    }
    if (is_connected(n, edges)) {
      return Graph::from_edges(n, std::move(edges), std::move(coords));
    }
  }
  throw UnconnectedGraphError("random geometric graph stayed disconnected after " +
                                  std::to_string(kMaxAttempts) + " attempts (n = " +
                                  std::to_string(n) + ", r = " + std::to_string(radius) + ")",
                              kMaxAttempts);
}

std::vector<std::pair<int, double>> incidence_row(const Graph& g, int e) {
  const Edge& ed = g.edge(e);
  return {{ed.u, 1.0}, {ed.v, -1.0}};
}

std::vector<double> laplacian_dense(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<double> lap(n * n, 0.0);
  for (const Edge& e : g.edges()) {
    const auto u = static_cast<std::size_t>(e.u);
    const auto v = static_cast<std::size_t>(e.v);
    lap[u * n + u] += 1.0;
    lap[v * n + v] += 1.0;
    lap[u * n + v] -= 1.0;
    lap[v * n + u] -= 1.0;
  }
  return lap;
}

SpectralSummary spectral_summary(const Graph& g) {
  const int n = g.node_count();
  if (n < 2) {
    throw InvalidArgumentError("spectral summary needs at least two nodes");
  }
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    lap(e.u, e.u) += 1.0;
    lap(e.v, e.v) += 1.0;
    lap(e.u, e.v) -= 1.0;
    lap(e.v, e.u) -= 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error("Laplacian eigendecomposition failed");
  }
  const Eigen::VectorXd ascending = solver.eigenvalues();
  SpectralSummary s;
  s.alpha = ascending(1);
  if (s.alpha <= 1e-9) {
    throw DisconnectedGraphError("algebraic connectivity is numerically zero");
  }
  s.beta = static_cast<double>(n) / s.alpha;
  s.laplacian_eigenvalues.assign(ascending.data(), ascending.data() + n);
  std::reverse(s.laplacian_eigenvalues.begin(), s.laplacian_eigenvalues.end());
  return s;
}

}  // namespace gossip

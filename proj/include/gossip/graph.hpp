#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace gossip {

// Undirected edge, stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Position of a node in the unit square (random geometric graphs only).
struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

// Simple connected undirected graph with an indexed edge list.
// Edge index e is the row index of the oriented incidence matrix:
// +1 at the lower endpoint, -1 at the higher one. Immutable once built.
class Graph {
public:
  // Validates endpoints, rejects self-loops and duplicates (edges are
  // normalized to u < v first), and requires the graph to be connected.
  static Graph from_edges(int node_count, std::vector<Edge> edges,
                          std::optional<std::vector<Point2>> coordinates = std::nullopt);

  int node_count() const noexcept { return n_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(int e) const;
  const std::vector<int>& degrees() const noexcept { return degrees_; }
  int min_degree() const;
  const std::optional<std::vector<Point2>>& coordinates() const noexcept { return coords_; }

private:
  Graph() = default;

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> degrees_;
  std::optional<std::vector<Point2>> coords_;
};

// Cycle C(n) on n >= 3 nodes: edges (0,1), (1,2), ..., (n-2,n-1), (0,n-1).
Graph build_cycle(int n);

// Connectivity-threshold radius sqrt(log(n)/n) used as the default for
// random geometric graphs.
double default_rgg_radius(int n);

// Random geometric graph: n nodes uniform in the unit square, an edge
// wherever the euclidean distance is below `radius`. Draws are retried
// (continuing the same seeded stream) until the graph comes out connected;
// after 100 failed attempts an UnconnectedGraphError is raised.
Graph build_random_geometric(int n, double radius, std::uint64_t seed);

// Nonzero entries of incidence row e, ordered by node index:
// {(u, +1), (v, -1)} for edge (u, v) with u < v.
std::vector<std::pair<int, double>> incidence_row(const Graph& g, int e);

// Dense graph Laplacian (row-major n x n), L = A^T A for the oriented
// incidence matrix A.
std::vector<double> laplacian_dense(const Graph& g);

struct SpectralSummary {
  double alpha = 0.0;                          // algebraic connectivity (2nd smallest eigenvalue)
  double beta = 0.0;                           // n / alpha
  std::vector<double> laplacian_eigenvalues;   // sorted descending
};

// Full symmetric eigendecomposition of the Laplacian. Throws
// DisconnectedGraphError when alpha falls below 1e-9.
SpectralSummary spectral_summary(const Graph& g);

}  // namespace gossip

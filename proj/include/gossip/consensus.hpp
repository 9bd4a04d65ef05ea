#pragma once

#include <optional>
#include <vector>

#include "gossip/graph.hpp"

namespace gossip {

using PrimalVector = std::vector<double>;  // one value per node
using DualVector = std::vector<double>;    // one multiplier per edge

// A gossip network together with the private initial values c held at the
// nodes. Averaging c is viewed as the best-approximation problem
//   minimize 0.5 * ||x - c||^2  subject to  x_u = x_v on every edge,
// whose dual D(y) = -(A c)^T y - 0.5 * ||A^T y||^2 is maximized by
// coordinate steps; A is the oriented incidence matrix of the graph.
class ConsensusProblem {
public:
  ConsensusProblem(Graph graph, std::vector<double> initial_values);

  const Graph& graph() const noexcept { return graph_; }
  const std::vector<double>& initial_values() const noexcept { return c_; }
  double mean_value() const noexcept { return c_bar_; }

  // D(y*) - D(0) = 0.5 * ||c_bar * 1 - c||^2. No linear solve involved:
  // the optimum is the all-mean vector.
  double initial_dual_gap() const noexcept { return initial_gap_; }

private:
  Graph graph_;
  std::vector<double> c_;
  double c_bar_ = 0.0;
  double initial_gap_ = 0.0;
};

// D(y) for a dual point y (length m). D(0) = 0.
double dual_value(const ConsensusProblem& p, const DualVector& y);

// Primal point carried by y: x(y) = c + A^T y.
PrimalVector map_to_primal(const ConsensusProblem& p, const DualVector& y);

// D(y*) - D(y) expressed through the primal point x = x(y):
// 0.5 * ||c_bar * 1 - x||^2. Valid for any x with mean(x) = mean(c).
double dual_suboptimality(const ConsensusProblem& p, const PrimalVector& x);

// Sum over edges of |x_u - x_v|.
double edge_gap_sum(const Graph& g, const PrimalVector& x);

// Mean absolute edge gap, (1/m) * sum_e |x_u - x_v|.
double edge_gap_measure(const Graph& g, const PrimalVector& x);

// Fraction of edges whose absolute gap is still >= eps. Requires eps > 0.
double gap_fraction(const Graph& g, const PrimalVector& x, double eps);

// ||x - x*||^2 / ||c - x*||^2 with x* the all-mean vector. Returns nullopt
// when the denominator vanishes (c already constant: nothing to solve).
std::optional<double> relative_error(const ConsensusProblem& p, const PrimalVector& x);

// Exact dual gain of moving lambda along incidence row e from the point
// whose primal image is x:  D(y + lambda f_e) - D(y) =
// -lambda * (x_u - x_v) - lambda^2   (the row has squared norm 2).
double dual_increment(const ConsensusProblem& p, const PrimalVector& x, int e, double lambda);

}  // namespace gossip

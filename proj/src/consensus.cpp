#include "gossip/consensus.hpp"

#include <cmath>
#include <string>

#include "gossip/errors.hpp"

namespace gossip {

namespace {

void check_length(std::size_t got, int want, const char* what) {
  if (got != static_cast<std::size_t>(want)) {
    throw InvalidArgumentError(std::string(what) + " has length " + std::to_string(got) +
                               ", expected " + std::to_string(want));
  }
}

}  // namespace

ConsensusProblem::ConsensusProblem(Graph graph, std::vector<double> initial_values)
    : graph_(std::move(graph)), c_(std::move(initial_values)) {
  check_length(c_.size(), graph_.node_count(), "initial value vector");
  double sum = 0.0;
  for (double v : c_) sum += v;
  c_bar_ = sum / static_cast<double>(c_.size());
  double sq = 0.0;
  for (double v : c_) {
    const double d = c_bar_ - v;
    sq += d * d;
  }
  initial_gap_ = 0.5 * sq;
}

double dual_value(const ConsensusProblem& p, const DualVector& y) {
  const Graph& g = p.graph();
  check_length(y.size(), g.edge_count(), "dual vector");
  const std::vector<double>& c = p.initial_values();
  // z = A^T y, accumulated edge by edge; linear term uses (A c)_e = c_u - c_v.
  std::vector<double> z(c.size(), 0.0);
  double linear = 0.0;
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edges()[static_cast<std::size_t>(e)];
    const double ye = y[static_cast<std::size_t>(e)];
    z[static_cast<std::size_t>(ed.u)] += ye;
    z[static_cast<std::size_t>(ed.v)] -= ye;
    linear += (c[static_cast<std::size_t>(ed.u)] - c[static_cast<std::size_t>(ed.v)]) * ye;
  }
  double quad = 0.0;
  for (double zi : z) quad += zi * zi;
  return -linear - 0.5 * quad;
}

PrimalVector map_to_primal(const ConsensusProblem& p, const DualVector& y) {
  const Graph& g = p.graph();
  check_length(y.size(), g.edge_count(), "dual vector");
  PrimalVector x = p.initial_values();
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edges()[static_cast<std::size_t>(e)];
    const double ye = y[static_cast<std::size_t>(e)];
    x[static_cast<std::size_t>(ed.u)] += ye;
    x[static_cast<std::size_t>(ed.v)] -= ye;
  }
  return x;
}

double dual_suboptimality(const ConsensusProblem& p, const PrimalVector& x) {
  check_length(x.size(), p.graph().node_count(), "primal vector");
  const double target = p.mean_value();
  double sq = 0.0;
  for (double xi : x) {
    const double d = target - xi;
    sq += d * d;
  }
  return 0.5 * sq;
}

double edge_gap_sum(const Graph& g, const PrimalVector& x) {
  check_length(x.size(), g.node_count(), "primal vector");
  double sum = 0.0;
  for (const Edge& e : g.edges()) {
    sum += std::abs(x[static_cast<std::size_t>(e.u)] - x[static_cast<std::size_t>(e.v)]);
  }
  return sum;
}

double edge_gap_measure(const Graph& g, const PrimalVector& x) {
  return edge_gap_sum(g, x) / static_cast<double>(g.edge_count());
}

double gap_fraction(const Graph& g, const PrimalVector& x, double eps) {
  check_length(x.size(), g.node_count(), "primal vector");
  if (!(eps > 0.0)) throw InvalidArgumentError("gap threshold eps must be positive");
  int count = 0;
  for (const Edge& e : g.edges()) {
    if (std::abs(x[static_cast<std::size_t>(e.u)] - x[static_cast<std::size_t>(e.v)]) >= eps) {
      ++count;
    }
  }
  return static_cast<double>(count) / static_cast<double>(g.edge_count());
}

std::optional<double> relative_error(const ConsensusProblem& p, const PrimalVector& x) {
  check_length(x.size(), p.graph().node_count(), "primal vector");
  const double denom = 2.0 * p.initial_dual_gap();  // ||c - x*||^2
  double scale = 1.0;
  for (double ci : p.initial_values()) scale = std::max(scale, ci * ci);
  if (denom <= 1e-24 * scale) return std::nullopt;  // c was already constant
  const double target = p.mean_value();
  double num = 0.0;
  for (double xi : x) {
    const double d = xi - target;
    num += d * d;
  }
  return num / denom;
}

double dual_increment(const ConsensusProblem& p, const PrimalVector& x, int e, double lambda) {
  check_length(x.size(), p.graph().node_count(), "primal vector");
  const Edge& ed = p.graph().edge(e);
  const double gap = x[static_cast<std::size_t>(ed.u)] - x[static_cast<std::size_t>(ed.v)];
  return -lambda * gap - lambda * lambda;
}

}  // namespace gossip

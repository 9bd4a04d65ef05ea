#pragma once

#include <string>
#include <vector>

#include "gossip/consensus.hpp"
#include "gossip/protocols.hpp"

namespace gossip {

// Expected dual suboptimality of standard gossip after k steps:
// (1 - alpha/(2m))^k * (D(y*) - D(0)).
double standard_bound(const ConsensusProblem& p, long k);

// Decay guarantee for the binary oracle with a predetermined stepsize
// schedule: U^k = (d_gap + sum_t lambda_t^2) / (sum_t lambda_t), sums over
// t = 0..k. It bounds min over t <= k of the expected mean absolute edge
// gap, E[(1/m) sum_e |x_u - x_v|]. Closed forms are used where they exist:
//   constant lambda0        -> d_gap / (lambda0 (k+1)) + lambda0
//   sqrt(r/(k+1)) horizon   -> 2 sqrt(r / (k+1))
//   a / sqrt(t+1)           -> (d_gap + a^2 (log(k + 3/2) + log 2)) / (2a (sqrt(k+2) - 1))
// and a / (t+1) is evaluated by direct summation. The adaptive schedule has
// its own geometric guarantee, see adaptive_binary_bound.
double binary_bound_u(double d_gap, const StepsizeSchedule& schedule, long k);

// Expected squared deviation ||mean(c) 1 - x^k||^2 of the binary oracle with
// the adaptive stepsize (1/(2m)) sum_e |x_u - x_v|:
// (1 - alpha/(2 m^2))^k * ||mean(c) 1 - c||^2.
double adaptive_binary_bound(const ConsensusProblem& p, long k);

// eps-gap oracle, k >= 1: the expected fraction of edges with |gap| >= eps,
// averaged over iterations 0..k-1, is at most 4 d_gap / (k eps^2).
double eps_gap_bound(double d_gap, long k, double eps);

// E[phi^(2 t_i)] after t steps for a node of degree `degree`:
// (1 - (degree/m) (1 - phi^2))^t.
double expected_phi_power(int degree, int edge_count, double phi, long t);

// Weighted residual-noise decay profile
// psi_t = (sum_i d_i sigma_i^2)^-1 * sum_i d_i sigma_i^2 (1 - (d_i/m)(1 - phi_i^2))^t.
// Undefined (throws) when every sigma_i is zero.
double noise_psi(const Graph& g, const NoiseParams& params, long t);

// Expected dual suboptimality of the controlled-noise protocol:
// rho^k * d_gap + (sum_i d_i sigma_i^2 / (4m)) * sum_{t=1..k} rho^(k-t) psi_t,
// with rho = 1 - alpha/(2m). Reduces to standard_bound when all sigma_i = 0.
// Evaluated by direct summation, O(k n).
double noise_bound(const ConsensusProblem& p, const NoiseParams& params, long k);

struct NoiseThresholdReport {
  double rho = 0.0;                   // 1 - alpha/(2m)
  std::vector<double> decay_factors;  // per node: 1 - (d_i/m)(1 - phi_i^2)
  std::vector<bool> noise_dominated;  // rho <= factor: node's noise outlives the gossip rate
  std::vector<int> slowest_nodes;     // argmax of decay_factors (ties within 1e-12)
};

// Compares each node's residual-noise decay against the gossip contraction
// rate; nodes whose factor reaches rho dominate the long-run behaviour.
NoiseThresholdReport noise_threshold_check(const Graph& g, const NoiseParams& params);

// Theoretical bound curve matched to a protocol, evaluated on an ascending
// iteration grid with the spectral quantities computed once.
struct BoundReport {
  ProtocolKind protocol = ProtocolKind::Standard;
  std::string measure;  // which expectation the values bound
  std::vector<long> iterations;
  std::vector<double> values;

  // inputs the curve was built from
  int node_count = 0;
  int edge_count = 0;
  double alpha = 0.0;
  double rho = 0.0;
  double initial_gap = 0.0;      // D(y*) - D(0)
  double stepsize_sum = 0.0;     // binary schedules: sums at the last grid point
  double stepsize_sq_sum = 0.0;
  double eps = 0.0;
  std::vector<double> sigma;
  std::vector<double> phi;
};

BoundReport bound_report(const ConsensusProblem& p, const ProtocolSpec& spec,
                         const std::vector<long>& iterations);

}  // namespace gossip

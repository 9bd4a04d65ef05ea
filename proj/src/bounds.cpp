#include "gossip/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "gossip/errors.hpp"

namespace gossip {

namespace {

double contraction_rate(const Graph& g) {
  return 1.0 - spectral_summary(g).alpha / (2.0 * static_cast<double>(g.edge_count()));
}

void check_iterations(long k) {
  if (k < 0) throw InvalidArgumentError("iteration count must be >= 0");
}

// Per-node decay factor of E[phi^(2 t_i)]: 1 - (d_i/m)(1 - phi_i^2).
double node_decay_factor(int degree, int edge_count, double phi) {
  return 1.0 - (static_cast<double>(degree) / static_cast<double>(edge_count)) * (1.0 - phi * phi);
}

double weighted_sigma_sum(const Graph& g, const NoiseParams& params) {
  double sum = 0.0;
  for (int i = 0; i < g.node_count(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    sum += static_cast<double>(g.degrees()[ui]) * params.sigma[ui] * params.sigma[ui];
  }
  return sum;
}

}  // namespace

double standard_bound(const ConsensusProblem& p, long k) {
  check_iterations(k);
  return std::pow(contraction_rate(p.graph()), static_cast<double>(k)) * p.initial_dual_gap();
}

double binary_bound_u(double d_gap, const StepsizeSchedule& schedule, long k) {
  check_iterations(k);
  if (!(d_gap >= 0.0)) throw InvalidArgumentError("initial gap must be >= 0");
  const double kk = static_cast<double>(k);
  switch (schedule.kind) {
    case StepsizeSchedule::Kind::Constant:
      return d_gap / (schedule.a * (kk + 1.0)) + schedule.a;
    case StepsizeSchedule::Kind::FixedHorizonOptimal:
      return 2.0 * std::sqrt(schedule.horizon_r / (kk + 1.0));
    case StepsizeSchedule::Kind::InverseSqrtT:
      return (d_gap + schedule.a * schedule.a * (std::log(kk + 1.5) + std::log(2.0))) /
             (2.0 * schedule.a * (std::sqrt(kk + 2.0) - 1.0));
    case StepsizeSchedule::Kind::InverseT: {
      double sum = 0.0;
      double sq_sum = 0.0;
      for (long t = 0; t <= k; ++t) {
        const double lam = schedule.value(t);
        sum += lam;
        sq_sum += lam * lam;
      }
      if (!(sum > 0.0)) throw InvalidArgumentError("stepsize sum must be positive");
      return (d_gap + sq_sum) / sum;
    }
    case StepsizeSchedule::Kind::Adaptive:
      throw InvalidArgumentError(
          "the adaptive schedule is covered by adaptive_binary_bound, not the U^k guarantee");
  }
  throw InvalidArgumentError("unknown stepsize schedule");
}

double adaptive_binary_bound(const ConsensusProblem& p, long k) {
  check_iterations(k);
  const double m = static_cast<double>(p.graph().edge_count());
  const double rate = 1.0 - spectral_summary(p.graph()).alpha / (2.0 * m * m);
  return std::pow(rate, static_cast<double>(k)) * 2.0 * p.initial_dual_gap();
}

double eps_gap_bound(double d_gap, long k, double eps) {
  if (k < 1) throw InvalidArgumentError("the eps-gap guarantee needs k >= 1");
  if (!(eps > 0.0)) throw InvalidArgumentError("eps must be positive");
  if (!(d_gap >= 0.0)) throw InvalidArgumentError("initial gap must be >= 0");
  return 4.0 * d_gap / (static_cast<double>(k) * eps * eps);
}

double expected_phi_power(int degree, int edge_count, double phi, long t) {
  check_iterations(t);
  if (degree < 1 || edge_count < degree) {
    throw InvalidArgumentError("need 1 <= degree <= edge count");
  }
  return std::pow(node_decay_factor(degree, edge_count, phi), static_cast<double>(t));
}

double noise_psi(const Graph& g, const NoiseParams& params, long t) {
  check_iterations(t);
  params.validate(g.node_count());
  const double total = weighted_sigma_sum(g, params);
  if (!(total > 0.0)) {
    throw InvalidArgumentError("psi is undefined when every sigma is zero");
  }
  double sum = 0.0;
  for (int i = 0; i < g.node_count(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double weight =
        static_cast<double>(g.degrees()[ui]) * params.sigma[ui] * params.sigma[ui];
    if (weight == 0.0) continue;
    sum += weight * std::pow(node_decay_factor(g.degrees()[ui], g.edge_count(), params.phi[ui]),
                             static_cast<double>(t));
  }
  return sum / total;
}

double noise_bound(const ConsensusProblem& p, const NoiseParams& params, long k) {
  check_iterations(k);
  const Graph& g = p.graph();
  params.validate(g.node_count());
  const double rho = contraction_rate(g);
  double bound = std::pow(rho, static_cast<double>(k)) * p.initial_dual_gap();
  const double total = weighted_sigma_sum(g, params);
  if (total > 0.0) {
    const double m = static_cast<double>(g.edge_count());
    for (long t = 1; t <= k; ++t) {
      bound += (total / (4.0 * m)) * std::pow(rho, static_cast<double>(k - t)) *
               noise_psi(g, params, t);
    }
  }
  return bound;
}

NoiseThresholdReport noise_threshold_check(const Graph& g, const NoiseParams& params) {
  params.validate(g.node_count());
  NoiseThresholdReport report;
  report.rho = contraction_rate(g);
  report.decay_factors.reserve(static_cast<std::size_t>(g.node_count()));
  for (int i = 0; i < g.node_count(); ++i) {
    report.decay_factors.push_back(node_decay_factor(
        g.degrees()[static_cast<std::size_t>(i)], g.edge_count(), params.phi[static_cast<std::size_t>(i)]));
  }
  const double top = *std::max_element(report.decay_factors.begin(), report.decay_factors.end());
  const double tie_tol = 1e-12 * std::max(1.0, std::abs(top));
  for (int i = 0; i < g.node_count(); ++i) {
    const double f = report.decay_factors[static_cast<std::size_t>(i)];
    report.noise_dominated.push_back(report.rho <= f);
    if (f >= top - tie_tol) report.slowest_nodes.push_back(i);
  }
  return report;
}

BoundReport bound_report(const ConsensusProblem& p, const ProtocolSpec& spec,
                         const std::vector<long>& iterations) {
  spec.validate(p);
  if (!std::is_sorted(iterations.begin(), iterations.end())) {
    throw InvalidArgumentError("iteration grid must be ascending");
  }
  if (!iterations.empty() && iterations.front() < 0) {
    throw InvalidArgumentError("iteration grid must be >= 0");
  }

  const Graph& g = p.graph();
  BoundReport rep;
  rep.protocol = spec.kind;
  rep.iterations = iterations;
  rep.node_count = g.node_count();
  rep.edge_count = g.edge_count();
  rep.alpha = spectral_summary(g).alpha;
  const double m = static_cast<double>(g.edge_count());
  rep.rho = 1.0 - rep.alpha / (2.0 * m);
  rep.initial_gap = p.initial_dual_gap();
  rep.values.reserve(iterations.size());

  switch (spec.kind) {
    case ProtocolKind::Standard: {
      rep.measure = "expected_dual_suboptimality";
      for (long k : iterations) {
        rep.values.push_back(std::pow(rep.rho, static_cast<double>(k)) * rep.initial_gap);
      }
      break;
    }
    case ProtocolKind::Binary: {
      if (spec.schedule.is_adaptive()) {
        rep.measure = "expected_squared_deviation";
        const double rate = 1.0 - rep.alpha / (2.0 * m * m);
        for (long k : iterations) {
          rep.values.push_back(std::pow(rate, static_cast<double>(k)) * 2.0 * rep.initial_gap);
        }
        break;
      }
      rep.measure = "min_expected_mean_edge_gap";
      if (spec.schedule.kind == StepsizeSchedule::Kind::InverseT) {
        // One forward pass over t keeps the whole grid O(max k).
        double sum = 0.0;
        double sq_sum = 0.0;
        long t = 0;
        for (long k : iterations) {
          for (; t <= k; ++t) {
            const double lam = spec.schedule.value(t);
            sum += lam;
            sq_sum += lam * lam;
          }
          rep.values.push_back((rep.initial_gap + sq_sum) / sum);
          rep.stepsize_sum = sum;
          rep.stepsize_sq_sum = sq_sum;
        }
      } else {
        for (long k : iterations) {
          rep.values.push_back(binary_bound_u(rep.initial_gap, spec.schedule, k));
        }
        if (!iterations.empty()) {
          const long last = iterations.back();
          for (long t = 0; t <= last; ++t) {
            const double lam = spec.schedule.value(t);
            rep.stepsize_sum += lam;
            rep.stepsize_sq_sum += lam * lam;
          }
        }
      }
      break;
    }
    case ProtocolKind::EpsGap: {
      rep.measure = "expected_average_gap_fraction";
      rep.eps = spec.eps;
      for (long k : iterations) {
        rep.values.push_back(eps_gap_bound(rep.initial_gap, k, spec.eps));
      }
      break;
    }
    case ProtocolKind::Noise: {
      rep.measure = "expected_dual_suboptimality";
      rep.sigma = spec.noise.sigma;
      rep.phi = spec.noise.phi;
      // Incremental form of the double sum: B_t = rho B_{t-1} + q_t / (4m)
      // with q_t = sum_i d_i sigma_i^2 factor_i^t, so a full curve costs
      // O(max k * n) instead of O(max k^2 n).
      std::vector<double> factor(static_cast<std::size_t>(g.node_count()));
      std::vector<double> factor_pow(static_cast<std::size_t>(g.node_count()), 1.0);
      std::vector<double> weight(static_cast<std::size_t>(g.node_count()));
      for (int i = 0; i < g.node_count(); ++i) {
        const auto ui = static_cast<std::size_t>(i);
        factor[ui] = node_decay_factor(g.degrees()[ui], g.edge_count(), spec.noise.phi[ui]);
        weight[ui] = static_cast<double>(g.degrees()[ui]) * spec.noise.sigma[ui] * spec.noise.sigma[ui];
      }
      double bound = rep.initial_gap;
      long t = 0;
      for (long k : iterations) {
        for (; t < k; ++t) {
          double q = 0.0;
          for (std::size_t ui = 0; ui < factor.size(); ++ui) {
            factor_pow[ui] *= factor[ui];
            q += weight[ui] * factor_pow[ui];
          }
          bound = rep.rho * bound + q / (4.0 * m);
        }
        rep.values.push_back(bound);
      }
      break;
    }
  }
  return rep;
}

}  // namespace gossip

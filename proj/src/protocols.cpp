#include "gossip/protocols.hpp"

#include <cmath>
#include <string>

#include "gossip/errors.hpp"

namespace gossip {

int sample_edge(const Graph& g, RngStream& rng) {
  return rng.uniform_index(g.edge_count());
}

NoiseParams NoiseParams::uniform(int n, double sigma, double phi) {
  NoiseParams p;
  p.sigma.assign(static_cast<std::size_t>(n), sigma);
  p.phi.assign(static_cast<std::size_t>(n), phi);
  return p;
}

void NoiseParams::validate(int n) const {
  if (sigma.size() != static_cast<std::size_t>(n) || phi.size() != static_cast<std::size_t>(n)) {
    throw InvalidArgumentError("noise parameter vectors must have one entry per node");
  }
  for (double s : sigma) {
    if (!(s >= 0.0)) throw InvalidArgumentError("noise sigma must be >= 0");
  }
  for (double f : phi) {
    if (!(f >= 0.0) || f >= 1.0) throw InvalidArgumentError("noise phi must lie in [0, 1)");
  }
}

std::vector<double> phi_from_gamma(const Graph& g, double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgumentError("gamma must be positive");
  const int d_min = g.min_degree();
  if (gamma > static_cast<double>(d_min)) {
    throw InvalidArgumentError("gamma = " + std::to_string(gamma) +
                               " exceeds the minimum degree " + std::to_string(d_min));
  }
  std::vector<double> phi(static_cast<std::size_t>(g.node_count()));
  for (int i = 0; i < g.node_count(); ++i) {
    phi[static_cast<std::size_t>(i)] =
        std::sqrt(1.0 - gamma / static_cast<double>(g.degrees()[static_cast<std::size_t>(i)]));
  }
  return phi;
}

StepsizeSchedule StepsizeSchedule::constant(double lambda0) {
  if (!(lambda0 > 0.0)) throw InvalidArgumentError("constant stepsize must be positive");
  return {Kind::Constant, lambda0, 0.0, 0};
}

StepsizeSchedule StepsizeSchedule::inverse_t(double a) {
  if (!(a > 0.0)) throw InvalidArgumentError("stepsize numerator must be positive");
  return {Kind::InverseT, a, 0.0, 0};
}

StepsizeSchedule StepsizeSchedule::inverse_sqrt_t(double a) {
  if (!(a > 0.0)) throw InvalidArgumentError("stepsize numerator must be positive");
  return {Kind::InverseSqrtT, a, 0.0, 0};
}

StepsizeSchedule StepsizeSchedule::fixed_horizon_optimal(double r, long k) {
  if (!(r > 0.0)) throw InvalidArgumentError("gap estimate r must be positive");
  if (k < 0) throw InvalidArgumentError("horizon must be >= 0");
  return {Kind::FixedHorizonOptimal, 0.0, r, k};
}

StepsizeSchedule StepsizeSchedule::adaptive(double scale) {
  if (!(scale > 0.0)) throw InvalidArgumentError("adaptive scale must be positive");
  return {Kind::Adaptive, scale, 0.0, 0};
}

double StepsizeSchedule::value(long t, double edge_gap_sum) const {
  switch (kind) {
    case Kind::Constant:
      return a;
    case Kind::InverseT:
      return a / static_cast<double>(t + 1);
    case Kind::InverseSqrtT:
      return a / std::sqrt(static_cast<double>(t + 1));
    case Kind::FixedHorizonOptimal:
      return std::sqrt(horizon_r / static_cast<double>(horizon_k + 1));
    case Kind::Adaptive:
      return a * edge_gap_sum;
  }
  throw InvalidArgumentError("unknown stepsize schedule");
}

ProtocolState ProtocolState::standard_start(const ConsensusProblem& p, bool track_dual) {
  ProtocolState s;
  s.x = p.initial_values();
  if (track_dual) {
    s.y.emplace(static_cast<std::size_t>(p.graph().edge_count()), 0.0);
  }
  return s;
}

ProtocolState ProtocolState::noise_start(const ConsensusProblem& p) {
  ProtocolState s;
  s.x = p.initial_values();
  const auto n = s.x.size();
  s.noise_counters.assign(n, 0);
  s.outstanding_noise.assign(n, 0.0);
  s.phi_power.assign(n, 1.0);  // phi^0
  return s;
}

double ProtocolState::outstanding_noise_total() const {
  double sum = 0.0;
  for (double r : outstanding_noise) sum += r;
  return sum;
}

void step_standard(ProtocolState& s, const Graph& g, int e) {
  const Edge& ed = g.edge(e);
  const auto i = static_cast<std::size_t>(ed.u);
  const auto j = static_cast<std::size_t>(ed.v);
  if (s.y) {
    (*s.y)[static_cast<std::size_t>(e)] += 0.5 * (s.x[j] - s.x[i]);
  }
  const double avg = 0.5 * (s.x[i] + s.x[j]);
  s.x[i] = avg;
  s.x[j] = avg;
  ++s.iteration;
}

void step_binary(ProtocolState& s, const Graph& g, int e, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgumentError("binary step needs lambda > 0");
  const Edge& ed = g.edge(e);
  const auto i = static_cast<std::size_t>(ed.u);
  const auto j = static_cast<std::size_t>(ed.v);
  if (s.x[i] < s.x[j]) {
    s.x[i] += lambda;
    s.x[j] -= lambda;
    if (s.y) (*s.y)[static_cast<std::size_t>(e)] += lambda;
  } else {
    s.x[i] -= lambda;
    s.x[j] += lambda;
    if (s.y) (*s.y)[static_cast<std::size_t>(e)] -= lambda;
  }
  ++s.iteration;
}

void step_eps_gap(ProtocolState& s, const Graph& g, int e, double eps) {
  if (!(eps > 0.0)) throw InvalidArgumentError("eps-gap step needs eps > 0");
  const Edge& ed = g.edge(e);
  const auto i = static_cast<std::size_t>(ed.u);
  const auto j = static_cast<std::size_t>(ed.v);
  const double half = 0.5 * eps;
  if (s.x[i] <= s.x[j] - eps) {
    s.x[i] += half;
    s.x[j] -= half;
    if (s.y) (*s.y)[static_cast<std::size_t>(e)] += half;
  } else if (s.x[j] <= s.x[i] - eps) {
    s.x[i] -= half;
    s.x[j] += half;
    if (s.y) (*s.y)[static_cast<std::size_t>(e)] -= half;
  }
  ++s.iteration;
}

void step_noise(ProtocolState& s, const Graph& g, int e, const NoiseParams& params,
                RngStream& rng) {
  const Edge& ed = g.edge(e);
  const auto i = static_cast<std::size_t>(ed.u);
  const auto j = static_cast<std::size_t>(ed.v);
  // Zero-sigma nodes skip the draw entirely (their perturbation is exactly
  // zero); this keeps the edge stream aligned with a standard-gossip run.
  const double vi = params.sigma[i] > 0.0 ? params.sigma[i] * rng.standard_normal() : 0.0;
  const double vj = params.sigma[j] > 0.0 ? params.sigma[j] * rng.standard_normal() : 0.0;
  const double fresh_i = s.phi_power[i] * vi;
  const double fresh_j = s.phi_power[j] * vj;
  const double wi = fresh_i - s.outstanding_noise[i];
  const double wj = fresh_j - s.outstanding_noise[j];
  const double avg = 0.5 * ((s.x[i] + wi) + (s.x[j] + wj));
  s.x[i] = avg;
  s.x[j] = avg;
  s.outstanding_noise[i] = fresh_i;
  s.outstanding_noise[j] = fresh_j;
  s.phi_power[i] *= params.phi[i];
  s.phi_power[j] *= params.phi[j];
  ++s.noise_counters[i];
  ++s.noise_counters[j];
  ++s.iteration;
}

void ProtocolSpec::validate(const ConsensusProblem& p) const {
  switch (kind) {
    case ProtocolKind::Standard:
      break;
    case ProtocolKind::Binary:
      // Re-run the factory checks in case the schedule was built by hand.
      if (schedule.kind == StepsizeSchedule::Kind::FixedHorizonOptimal) {
        if (!(schedule.horizon_r > 0.0) || schedule.horizon_k < 0) {
          throw InvalidArgumentError("fixed-horizon schedule needs r > 0 and k >= 0");
        }
      } else if (!(schedule.a > 0.0)) {
        throw InvalidArgumentError("stepsize schedule parameter must be positive");
      }
      break;
    case ProtocolKind::EpsGap:
      if (!(eps > 0.0)) throw InvalidArgumentError("eps-gap protocol needs eps > 0");
      break;
    case ProtocolKind::Noise:
      noise.validate(p.graph().node_count());
      if (track_dual) {
        throw InvalidArgumentError("the noise protocol maintains no dual iterate");
      }
      break;
  }
}

namespace {

double mean_of(const std::vector<double>& x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

}  // namespace

Trace run(const ConsensusProblem& p, const ProtocolSpec& spec, long iterations,
          std::uint64_t seed, const RecordingOptions& rec) {
  spec.validate(p);
  if (iterations < 0) throw InvalidArgumentError("iteration count must be >= 0");
  if (rec.stride < 1) throw InvalidArgumentError("record stride must be >= 1");
  if (iterations > 0 && p.graph().edge_count() == 0) {
    throw InvalidArgumentError("cannot gossip on a graph without edges");
  }

  const Graph& g = p.graph();
  ProtocolState s = spec.kind == ProtocolKind::Noise
                        ? ProtocolState::noise_start(p)
                        : ProtocolState::standard_start(p, spec.track_dual);
  RngStream rng(seed);

  Trace tr;
  tr.has_gap_fraction = rec.gap_eps.has_value();

  const auto record = [&]() {
    TraceRecord r;
    r.iteration = s.iteration;
    r.dual_subopt = dual_suboptimality(p, s.x);
    r.rel_error = relative_error(p, s.x).value_or(0.0);
    r.edge_gap_mean = edge_gap_measure(g, s.x);
    r.gap_fraction = rec.gap_eps ? gap_fraction(g, s.x, *rec.gap_eps) : 0.0;
    r.mean_drift = mean_of(s.x) - p.mean_value();
    if (r.edge_gap_mean < tr.min_edge_gap_mean) {
      tr.min_edge_gap_mean = r.edge_gap_mean;
      tr.min_edge_gap_iteration = r.iteration;
    }
    tr.records.push_back(r);
    if (rec.on_state) rec.on_state(s.iteration, s.x);
  };

  record();
  for (long t = 0; t < iterations; ++t) {
    const int e = sample_edge(g, rng);
    switch (spec.kind) {
      case ProtocolKind::Standard:
        step_standard(s, g, e);
        break;
      case ProtocolKind::Binary: {
        const double gaps = spec.schedule.is_adaptive() ? edge_gap_sum(g, s.x) : 0.0;
        const double lambda = spec.schedule.value(t, gaps);
        if (lambda > 0.0) {
          step_binary(s, g, e, lambda);
        } else {
          ++s.iteration;  // adaptive stepsize hit exact consensus; nothing to move
        }
        tr.stepsize_sum += lambda;
        tr.stepsize_sq_sum += lambda * lambda;
        break;
      }
      case ProtocolKind::EpsGap:
        step_eps_gap(s, g, e, spec.eps);
        break;
      case ProtocolKind::Noise:
        step_noise(s, g, e, spec.noise, rng);
        break;
    }
    if ((t + 1) % rec.stride == 0 || t + 1 == iterations) record();
  }

  tr.final_state = std::move(s);
  return tr;
}

}  // namespace gossip

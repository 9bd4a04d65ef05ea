#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "gossip/consensus.hpp"
#include "gossip/rng.hpp"

namespace gossip {

// One uniformly random edge index; consumes exactly one draw.
int sample_edge(const Graph& g, RngStream& rng);

// Per-node parameters of the controlled-noise protocol: fresh perturbations
// are N(0, sigma_i^2) and fade geometrically with factor phi_i in [0, 1).
struct NoiseParams {
  std::vector<double> sigma;
  std::vector<double> phi;

  static NoiseParams uniform(int n, double sigma, double phi);
  void validate(int n) const;
};

// phi_i = sqrt(1 - gamma / d_i): ties every node's residual-noise decay to
// its degree so the whole network fades at the common factor (1 - gamma/m).
// Requires 0 < gamma <= min degree.
std::vector<double> phi_from_gamma(const Graph& g, double gamma);

// Stepsize rule for the binary-oracle protocol, evaluated at iteration t
// (0-based). The adaptive rule needs the current sum of absolute edge gaps.
struct StepsizeSchedule {
  enum class Kind { Constant, InverseT, InverseSqrtT, FixedHorizonOptimal, Adaptive };

  Kind kind = Kind::Constant;
  double a = 0.0;         // lambda0 / numerator / adaptive scale
  double horizon_r = 0.0; // FixedHorizonOptimal only
  long horizon_k = 0;

  static StepsizeSchedule constant(double lambda0);
  static StepsizeSchedule inverse_t(double a);       // a / (t + 1)
  static StepsizeSchedule inverse_sqrt_t(double a);  // a / sqrt(t + 1)
  // Constant sqrt(r / (k + 1)), the minimizer of the decay guarantee when
  // the run length k is known up front and r bounds the initial dual gap.
  static StepsizeSchedule fixed_horizon_optimal(double r, long k);
  static StepsizeSchedule adaptive(double scale);    // scale * sum_e |x_u - x_v|

  bool is_adaptive() const noexcept { return kind == Kind::Adaptive; }
  double value(long t, double edge_gap_sum = 0.0) const;
};

// Mutable per-run state shared by all protocols. The dual vector y is kept
// only when a run asks for dual certification; the noise fields are used
// only by the controlled-noise protocol.
struct ProtocolState {
  std::vector<double> x;
  std::optional<std::vector<double>> y;
  long iteration = 0;

  std::vector<long> noise_counters;       // t_i: activations of node i so far
  std::vector<double> outstanding_noise;  // phi_i^(t_i - 1) * v_i^(t_i - 1), 0 before first activation
  std::vector<double> phi_power;          // phi_i^(t_i), kept in lockstep with t_i

  static ProtocolState standard_start(const ConsensusProblem& p, bool track_dual);
  static ProtocolState noise_start(const ConsensusProblem& p);

  // Sum of outstanding noise over nodes; equals sum(x) - sum(c) at all times.
  double outstanding_noise_total() const;
};

// Exact pairwise averaging across edge e; dual coordinate moves by the line
// search optimum (x_v - x_u) / 2.
void step_standard(ProtocolState& s, const Graph& g, int e);

// Binary oracle: endpoints only learn which one is larger. The lower value
// moves up by lambda, the higher moves down (on a tie, the endpoint with the
// smaller node index is treated as the higher one). Requires lambda > 0.
void step_binary(ProtocolState& s, const Graph& g, int e, double lambda);

// eps-gap oracle: endpoints only learn whether they differ by at least eps,
// and move eps/2 towards each other when they do (boundary |gap| = eps
// counts as a move). Requires eps > 0.
void step_eps_gap(ProtocolState& s, const Graph& g, int e, double eps);

// Controlled noise insertion: each endpoint adds its fresh perturbation and
// withdraws the faded remainder of its previous one, then the pair averages.
// Draw order per step: edge, then noise at the lower endpoint, then at the
// higher one. A node with sigma_i = 0 consumes no draws (its perturbation is
// identically zero), so an all-zero-sigma run replays standard gossip
// step for step on the same seed.
void step_noise(ProtocolState& s, const Graph& g, int e, const NoiseParams& params,
                RngStream& rng);

enum class ProtocolKind { Standard, Binary, EpsGap, Noise };

struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::Standard;
  StepsizeSchedule schedule;  // Binary only
  double eps = 0.0;           // EpsGap only
  NoiseParams noise;          // Noise only
  bool track_dual = false;    // unavailable for Noise (it has no dual iterate)

  void validate(const ConsensusProblem& p) const;
};

struct TraceRecord {
  long iteration = 0;
  double dual_subopt = 0.0;    // D(y*) - D(y^t) = 0.5 * ||mean(c) 1 - x||^2
  double rel_error = 0.0;      // ||x - x*||^2 / ||c - x*||^2 (0 when c is constant)
  double edge_gap_mean = 0.0;  // (1/m) sum_e |x_u - x_v|
  double gap_fraction = 0.0;   // share of edges with |gap| >= eps, when eps is set
  double mean_drift = 0.0;     // mean(x) - mean(c)
};

struct RecordingOptions {
  long stride = 1;                // record t = 0, every stride-th step, and the final step
  std::optional<double> gap_eps;  // threshold for the gap_fraction column
  // Optional per-node sink, called at every recorded iteration.
  std::function<void(long, const std::vector<double>&)> on_state = nullptr;
};

struct Trace {
  std::vector<TraceRecord> records;
  ProtocolState final_state;
  bool has_gap_fraction = false;

  // Cumulative schedule sums over executed steps (binary protocol only).
  double stepsize_sum = 0.0;     // sum of lambda^t
  double stepsize_sq_sum = 0.0;  // sum of (lambda^t)^2

  // Running minimum of edge_gap_mean over recorded iterations.
  double min_edge_gap_mean = std::numeric_limits<double>::infinity();
  long min_edge_gap_iteration = -1;
};

// Runs `iterations` single steps from x = c with a fresh RngStream(seed).
// Records at t = 0, at every stride-th iteration and at the end. A zero
// adaptive stepsize (x already constant) is executed as a no-op step.
Trace run(const ConsensusProblem& p, const ProtocolSpec& spec, long iterations,
          std::uint64_t seed, const RecordingOptions& rec = {});

}  // namespace gossip

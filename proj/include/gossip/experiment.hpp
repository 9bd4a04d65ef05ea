#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gossip/bounds.hpp"
#include "gossip/protocols.hpp"

namespace gossip {

// ---- configuration ---------------------------------------------------------
//
// Experiments are described by a JSON document with a schema_version field.
// Parsing is strict: unknown keys anywhere in the document are rejected so a
// typo cannot silently fall back to a default.

struct GraphConfig {
  enum class Kind { Cycle, Rgg, File };
  Kind kind = Kind::Cycle;
  int n = 0;
  std::optional<double> radius;  // rgg; sqrt(log(n)/n) when absent
  std::uint64_t seed = 0;        // rgg layout seed
  std::string path;              // file
};

struct InitialValuesConfig {
  std::optional<std::uint64_t> seed;  // per-node uniform [0,1) draws
  std::vector<double> values;         // explicit vector (exclusive with seed)
};

struct ScheduleConfig {
  StepsizeSchedule::Kind kind = StepsizeSchedule::Kind::Constant;
  double value = 0.0;           // lambda0 / numerator / explicit adaptive scale
  std::optional<double> r;      // fixed_horizon: absent = exact initial dual gap
  std::optional<long> horizon;  // fixed_horizon: absent = the run's iteration count
  std::string scale_rule;       // adaptive: "half_inverse_m" (default) or "quarter_inverse_m"
};

struct NoiseConfig {
  std::vector<double> sigma;     // one entry = same everywhere, else per node
  std::vector<double> phi;       // same; exclusive with gamma
  std::optional<double> gamma;   // degree rule, see phi_from_gamma
};

struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::Standard;
  ScheduleConfig schedule;  // binary
  double eps = 0.0;         // eps_gap
  NoiseConfig noise;        // noise
};

struct ExperimentConfig {
  GraphConfig graph;
  InitialValuesConfig initial_values;
  ProtocolConfig protocol;
  long iterations = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> metrics;  // canonical order, validated names
  std::optional<double> gap_eps;     // threshold behind the Delta_t column
  long record_stride = 0;            // 0 = auto: 1 while k <= 1e4, else ceil(k/1e4)
  bool track_dual = false;
  bool dump_trajectories = false;
  std::string output_dir = "out";
  int threads = 0;  // 0 = hardware concurrency
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

// ---- materialization -------------------------------------------------------

Graph make_graph(const GraphConfig& cfg);
std::vector<double> make_initial_values(const InitialValuesConfig& cfg, int n);
ProtocolSpec make_protocol(const ProtocolConfig& cfg, const ConsensusProblem& p, long iterations,
                           bool track_dual);
long resolve_stride(long configured, long iterations);
std::vector<long> record_marks(long iterations, long stride);

// ---- multi-seed execution --------------------------------------------------

using StateSnapshots = std::vector<std::pair<long, std::vector<double>>>;

struct BatchResult {
  std::vector<std::uint64_t> seeds;
  std::vector<Trace> traces;                   // aligned with seeds
  std::vector<StateSnapshots> trajectories;    // filled when requested
};

// Fans the seeds out over worker threads. Results land in seed order, so
// aggregation (and every file written from it) is independent of scheduling.
BatchResult run_batch(const ConsensusProblem& p, const ProtocolSpec& spec, long iterations,
                      const std::vector<std::uint64_t>& seeds, const RecordingOptions& recording,
                      int threads, bool keep_trajectories);

// ---- command entry points (shared by the CLI and the tests) ----------------

struct GraphInfo {
  int n = 0;
  int m = 0;
  int d_min = 0;
  double alpha = 0.0;
  double beta = 0.0;
};

GraphInfo cmd_graph(const GraphConfig& cfg, const std::filesystem::path& out_path);

struct RunArtifacts {
  std::filesystem::path trace_csv;
  std::filesystem::path summary_json;
  std::optional<std::filesystem::path> trajectory_csv;
};

// Runs every seed, then writes <output_dir>/trace.csv, <output_dir>/summary.json
// and optionally <output_dir>/trajectory.csv. Reruns with the same config
// produce byte-identical files.
RunArtifacts cmd_run(const ExperimentConfig& cfg);

struct BoundsArtifacts {
  std::filesystem::path bounds_csv;
  BoundReport report;
};

// Evaluates the protocol's theoretical bound on the record grid without
// simulating anything; writes <output_dir>/bounds.csv.
BoundsArtifacts cmd_bounds(const ExperimentConfig& cfg);

// ---- formatting / offline helpers ------------------------------------------

// Doubles are written with 17 significant digits so they parse back bit-exact.
std::string format_double(double v);
std::string csv_field(const std::string& raw);

struct TraceTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

TraceTable read_trace_csv(const std::filesystem::path& path);

}  // namespace gossip

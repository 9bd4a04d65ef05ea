#include "gossip/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "gossip/errors.hpp"
#include "gossip/graph_io.hpp"

namespace gossip {

namespace {

using nlohmann::json;

const std::vector<std::string>& canonical_metrics() {
  static const std::vector<std::string> names = {"dual_subopt", "rel_error", "L_t", "Delta_t",
                                                 "mean_drift"};
  return names;
}

[[noreturn]] void fail(const std::string& message) { throw ConfigError("config: " + message); }

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* key) { return it.key() == key; })) {
      fail(where + ": unknown key \"" + it.key() + "\"");
    }
  }
}

const json& get_required(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) fail(where + ": missing required key \"" + key + "\"");
  return obj.at(key);
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where + " must be a number");
  return v.get<double>();
}

long get_integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where + " must be an integer");
  return v.get<long>();
}

std::uint64_t get_seed(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    fail(where + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where + " must be a string");
  return v.get<std::string>();
}

bool get_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) fail(where + " must be a boolean");
  return v.get<bool>();
}

std::vector<double> get_scalar_or_vector(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& item : v) out.push_back(get_number(item, where + " entry"));
    if (out.empty()) fail(where + " must not be an empty array");
    return out;
  }
  fail(where + " must be a number or an array of numbers");
}

GraphConfig parse_graph(const json& obj) {
  if (!obj.is_object()) fail("graph must be an object");
  GraphConfig cfg;
  const std::string type = get_string(get_required(obj, "graph", "type"), "graph.type");
  if (type == "cycle") {
    check_keys(obj, "graph (cycle)", {"type", "n"});
    cfg.kind = GraphConfig::Kind::Cycle;
    cfg.n = static_cast<int>(get_integer(get_required(obj, "graph", "n"), "graph.n"));
  } else if (type == "rgg") {
    check_keys(obj, "graph (rgg)", {"type", "n", "r", "seed"});
    cfg.kind = GraphConfig::Kind::Rgg;
    cfg.n = static_cast<int>(get_integer(get_required(obj, "graph", "n"), "graph.n"));
    if (obj.contains("r")) cfg.radius = get_number(obj.at("r"), "graph.r");
    if (obj.contains("seed")) cfg.seed = get_seed(obj.at("seed"), "graph.seed");
  } else if (type == "file") {
    check_keys(obj, "graph (file)", {"type", "path"});
    cfg.kind = GraphConfig::Kind::File;
    cfg.path = get_string(get_required(obj, "graph", "path"), "graph.path");
  } else {
    fail("graph.type must be \"cycle\", \"rgg\" or \"file\"");
  }
  return cfg;
}

InitialValuesConfig parse_initial_values(const json& obj) {
  if (!obj.is_object()) fail("initial_values must be an object");
  InitialValuesConfig cfg;
  if (obj.contains("values")) {
    check_keys(obj, "initial_values", {"values"});
    for (const auto& item : obj.at("values")) {
      cfg.values.push_back(get_number(item, "initial_values.values entry"));
    }
    if (cfg.values.empty()) fail("initial_values.values must not be empty");
  } else {
    check_keys(obj, "initial_values", {"distribution", "seed"});
    const std::string dist =
        get_string(get_required(obj, "initial_values", "distribution"), "initial_values.distribution");
    if (dist != "uniform01") fail("initial_values.distribution must be \"uniform01\"");
    cfg.seed = get_seed(get_required(obj, "initial_values", "seed"), "initial_values.seed");
  }
  return cfg;
}

ScheduleConfig parse_schedule(const json& obj) {
  if (!obj.is_object()) fail("protocol.schedule must be an object");
  ScheduleConfig cfg;
  const std::string type =
      get_string(get_required(obj, "protocol.schedule", "type"), "protocol.schedule.type");
  if (type == "constant") {
    check_keys(obj, "schedule (constant)", {"type", "value"});
    cfg.kind = StepsizeSchedule::Kind::Constant;
    cfg.value = get_number(get_required(obj, "schedule", "value"), "schedule.value");
  } else if (type == "inverse_t") {
    check_keys(obj, "schedule (inverse_t)", {"type", "a"});
    cfg.kind = StepsizeSchedule::Kind::InverseT;
    cfg.value = get_number(get_required(obj, "schedule", "a"), "schedule.a");
  } else if (type == "inverse_sqrt_t") {
    check_keys(obj, "schedule (inverse_sqrt_t)", {"type", "a"});
    cfg.kind = StepsizeSchedule::Kind::InverseSqrtT;
    cfg.value = get_number(get_required(obj, "schedule", "a"), "schedule.a");
  } else if (type == "fixed_horizon") {
    check_keys(obj, "schedule (fixed_horizon)", {"type", "r", "k"});
    cfg.kind = StepsizeSchedule::Kind::FixedHorizonOptimal;
    if (obj.contains("r")) cfg.r = get_number(obj.at("r"), "schedule.r");
    if (obj.contains("k")) cfg.horizon = get_integer(obj.at("k"), "schedule.k");
  } else if (type == "adaptive") {
    check_keys(obj, "schedule (adaptive)", {"type", "scale"});
    cfg.kind = StepsizeSchedule::Kind::Adaptive;
    cfg.scale_rule = "half_inverse_m";
    if (obj.contains("scale")) {
      const json& scale = obj.at("scale");
      if (scale.is_string()) {
        cfg.scale_rule = scale.get<std::string>();
        if (cfg.scale_rule != "half_inverse_m" && cfg.scale_rule != "quarter_inverse_m") {
          fail("schedule.scale must be \"half_inverse_m\", \"quarter_inverse_m\" or a number");
        }
      } else {
        cfg.scale_rule.clear();
        cfg.value = get_number(scale, "schedule.scale");
      }
    }
  } else {
    fail("schedule.type must be one of constant, inverse_t, inverse_sqrt_t, fixed_horizon, adaptive");
  }
  return cfg;
}

ProtocolConfig parse_protocol(const json& obj) {
  if (!obj.is_object()) fail("protocol must be an object");
  ProtocolConfig cfg;
  const std::string type = get_string(get_required(obj, "protocol", "type"), "protocol.type");
  if (type == "standard") {
    check_keys(obj, "protocol (standard)", {"type"});
    cfg.kind = ProtocolKind::Standard;
  } else if (type == "binary") {
    check_keys(obj, "protocol (binary)", {"type", "schedule"});
    cfg.kind = ProtocolKind::Binary;
    cfg.schedule = parse_schedule(get_required(obj, "protocol", "schedule"));
  } else if (type == "eps_gap") {
    check_keys(obj, "protocol (eps_gap)", {"type", "eps"});
    cfg.kind = ProtocolKind::EpsGap;
    cfg.eps = get_number(get_required(obj, "protocol", "eps"), "protocol.eps");
    if (!(cfg.eps > 0.0)) fail("protocol.eps must be positive");
  } else if (type == "noise") {
    check_keys(obj, "protocol (noise)", {"type", "sigma", "phi", "gamma"});
    cfg.kind = ProtocolKind::Noise;
    cfg.noise.sigma = get_scalar_or_vector(get_required(obj, "protocol", "sigma"), "protocol.sigma");
    const bool has_phi = obj.contains("phi");
    const bool has_gamma = obj.contains("gamma");
    if (has_phi == has_gamma) fail("noise protocol needs exactly one of \"phi\" and \"gamma\"");
    if (has_phi) cfg.noise.phi = get_scalar_or_vector(obj.at("phi"), "protocol.phi");
    if (has_gamma) cfg.noise.gamma = get_number(obj.at("gamma"), "protocol.gamma");
  } else {
    fail("protocol.type must be one of standard, binary, eps_gap, noise");
  }
  return cfg;
}

std::vector<std::uint64_t> parse_seeds(const json& v) {
  std::vector<std::uint64_t> seeds;
  if (v.is_array()) {
    for (const auto& item : v) seeds.push_back(get_seed(item, "seeds entry"));
    if (seeds.empty()) fail("seeds must not be empty");
    return seeds;
  }
  if (v.is_object()) {
    check_keys(v, "seeds", {"base", "count"});
    const std::uint64_t base =
        v.contains("base") ? get_seed(v.at("base"), "seeds.base") : std::uint64_t{0};
    const long count = get_integer(get_required(v, "seeds", "count"), "seeds.count");
    if (count < 1) fail("seeds.count must be >= 1");
    for (long i = 0; i < count; ++i) seeds.push_back(base + static_cast<std::uint64_t>(i));
    return seeds;
  }
  fail("seeds must be an array or a {base, count} object");
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) fail("document root must be an object");
  check_keys(doc, "top level",
             {"schema_version", "graph", "initial_values", "protocol", "iterations", "seeds",
              "metrics", "gap_eps", "record_stride", "track_dual", "dump_trajectories",
              "output_dir", "threads"});
  const json& version = get_required(doc, "top level", "schema_version");
  if (!version.is_number_integer() || version.get<int>() != 1) {
    fail("schema_version must be the integer 1");
  }

  ExperimentConfig cfg;
  cfg.graph = parse_graph(get_required(doc, "top level", "graph"));
  cfg.initial_values = parse_initial_values(get_required(doc, "top level", "initial_values"));
  cfg.protocol = parse_protocol(get_required(doc, "top level", "protocol"));
  cfg.iterations = get_integer(get_required(doc, "top level", "iterations"), "iterations");
  if (cfg.iterations < 0) fail("iterations must be >= 0");

  cfg.seeds = doc.contains("seeds") ? parse_seeds(doc.at("seeds"))
                                    : parse_seeds(json{{"base", 0}, {"count", 50}});

  if (doc.contains("gap_eps")) {
    const double eps = get_number(doc.at("gap_eps"), "gap_eps");
    if (!(eps > 0.0)) fail("gap_eps must be positive");
    cfg.gap_eps = eps;
  } else if (cfg.protocol.kind == ProtocolKind::EpsGap) {
    cfg.gap_eps = cfg.protocol.eps;  // the oracle's own threshold
  }

  if (doc.contains("metrics")) {
    if (!doc.at("metrics").is_array()) fail("metrics must be an array of names");
    std::vector<std::string> asked;
    for (const auto& item : doc.at("metrics")) asked.push_back(get_string(item, "metrics entry"));
    if (asked.empty()) fail("metrics must not be empty");
    for (const std::string& name : asked) {
      const auto& known = canonical_metrics();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        fail("unknown metric \"" + name + "\"");
      }
      if (std::count(asked.begin(), asked.end(), name) > 1) {
        fail("metric \"" + name + "\" listed twice");
      }
    }
    // keep the canonical column order regardless of how the list was written
    for (const std::string& name : canonical_metrics()) {
      if (std::find(asked.begin(), asked.end(), name) != asked.end()) cfg.metrics.push_back(name);
    }
  } else {
    for (const std::string& name : canonical_metrics()) {
      if (name == "Delta_t" && !cfg.gap_eps) continue;
      cfg.metrics.push_back(name);
    }
  }
  if (std::find(cfg.metrics.begin(), cfg.metrics.end(), "Delta_t") != cfg.metrics.end() &&
      !cfg.gap_eps) {
    fail("metric Delta_t needs gap_eps (or the eps_gap protocol)");
  }

  if (doc.contains("record_stride")) {
    cfg.record_stride = get_integer(doc.at("record_stride"), "record_stride");
    if (cfg.record_stride < 0) fail("record_stride must be >= 0 (0 = automatic)");
  }
  if (doc.contains("track_dual")) cfg.track_dual = get_bool(doc.at("track_dual"), "track_dual");
  if (cfg.track_dual && cfg.protocol.kind == ProtocolKind::Noise) {
    fail("track_dual is unavailable for the noise protocol (it has no dual iterate)");
  }
  if (doc.contains("dump_trajectories")) {
    cfg.dump_trajectories = get_bool(doc.at("dump_trajectories"), "dump_trajectories");
  }
  if (doc.contains("output_dir")) cfg.output_dir = get_string(doc.at("output_dir"), "output_dir");
  if (doc.contains("threads")) {
    cfg.threads = static_cast<int>(get_integer(doc.at("threads"), "threads"));
    if (cfg.threads < 0) fail("threads must be >= 0 (0 = hardware concurrency)");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config: " + path.string() + " is not valid JSON");
  return parse_config(doc);
}

Graph make_graph(const GraphConfig& cfg) {
  switch (cfg.kind) {
    case GraphConfig::Kind::Cycle:
      return build_cycle(cfg.n);
    case GraphConfig::Kind::Rgg:
      return build_random_geometric(cfg.n, cfg.radius.value_or(default_rgg_radius(cfg.n)), cfg.seed);
    case GraphConfig::Kind::File:
      return load_graph(cfg.path);
  }
  throw ConfigError("config: unknown graph kind");
}

std::vector<double> make_initial_values(const InitialValuesConfig& cfg, int n) {
  if (!cfg.values.empty()) {
    if (cfg.values.size() != static_cast<std::size_t>(n)) {
      throw ConfigError("config: initial_values.values has length " +
                        std::to_string(cfg.values.size()) + " but the graph has " +
                        std::to_string(n) + " nodes");
    }
    return cfg.values;
  }
  RngStream rng(cfg.seed.value_or(0));
  std::vector<double> c(static_cast<std::size_t>(n));
  for (double& v : c) v = rng.uniform01();
  return c;
}

namespace {

std::vector<double> expand_per_node(std::vector<double> v, int n, const char* what) {
  if (v.size() == 1) return std::vector<double>(static_cast<std::size_t>(n), v.front());
  if (v.size() != static_cast<std::size_t>(n)) {
    throw ConfigError(std::string("config: ") + what + " needs 1 or n entries");
  }
  return v;
}

}  // namespace

ProtocolSpec make_protocol(const ProtocolConfig& cfg, const ConsensusProblem& p, long iterations,
                           bool track_dual) {
  ProtocolSpec spec;
  spec.kind = cfg.kind;
  spec.track_dual = track_dual;
  const int n = p.graph().node_count();
  const double m = static_cast<double>(p.graph().edge_count());
  switch (cfg.kind) {
    case ProtocolKind::Standard:
      break;
    case ProtocolKind::Binary:
      switch (cfg.schedule.kind) {
        case StepsizeSchedule::Kind::Constant:
          spec.schedule = StepsizeSchedule::constant(cfg.schedule.value);
          break;
        case StepsizeSchedule::Kind::InverseT:
          spec.schedule = StepsizeSchedule::inverse_t(cfg.schedule.value);
          break;
        case StepsizeSchedule::Kind::InverseSqrtT:
          spec.schedule = StepsizeSchedule::inverse_sqrt_t(cfg.schedule.value);
          break;
        case StepsizeSchedule::Kind::FixedHorizonOptimal:
          spec.schedule = StepsizeSchedule::fixed_horizon_optimal(
              cfg.schedule.r.value_or(p.initial_dual_gap()),
              cfg.schedule.horizon.value_or(iterations));
          break;
        case StepsizeSchedule::Kind::Adaptive: {
          double scale = cfg.schedule.value;
          if (cfg.schedule.scale_rule == "half_inverse_m") scale = 1.0 / (2.0 * m);
          if (cfg.schedule.scale_rule == "quarter_inverse_m") scale = 1.0 / (4.0 * m);
          spec.schedule = StepsizeSchedule::adaptive(scale);
          break;
        }
      }
      break;
    case ProtocolKind::EpsGap:
      spec.eps = cfg.eps;
      break;
    case ProtocolKind::Noise: {
      spec.noise.sigma = expand_per_node(cfg.noise.sigma, n, "protocol.sigma");
      if (cfg.noise.gamma) {
        spec.noise.phi = phi_from_gamma(p.graph(), *cfg.noise.gamma);
      } else {
        spec.noise.phi = expand_per_node(cfg.noise.phi, n, "protocol.phi");
      }
      spec.noise.validate(n);
      break;
    }
  }
  return spec;
}

long resolve_stride(long configured, long iterations) {
  if (configured > 0) return configured;
  if (iterations <= 10000) return 1;
  return (iterations + 9999) / 10000;  // ceil(k / 1e4)
}

std::vector<long> record_marks(long iterations, long stride) {
  std::vector<long> marks = {0};
  for (long t = stride; t < iterations; t += stride) marks.push_back(t);
  if (iterations > 0) marks.push_back(iterations);
  return marks;
}

BatchResult run_batch(const ConsensusProblem& p, const ProtocolSpec& spec, long iterations,
                      const std::vector<std::uint64_t>& seeds, const RecordingOptions& recording,
                      int threads, bool keep_trajectories) {
  if (seeds.empty()) throw InvalidArgumentError("need at least one seed");
  BatchResult out;
  out.seeds = seeds;
  out.traces.resize(seeds.size());
  if (keep_trajectories) out.trajectories.resize(seeds.size());

  const std::size_t requested = threads > 0 ? static_cast<std::size_t>(threads)
                                            : std::max(1u, std::thread::hardware_concurrency());
  const std::size_t worker_count = std::min(requested, seeds.size());

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  const auto worker = [&]() {
    for (std::size_t idx = next.fetch_add(1); idx < seeds.size(); idx = next.fetch_add(1)) {
      try {
        RecordingOptions rec = recording;
        if (keep_trajectories) {
          StateSnapshots* sink = &out.trajectories[idx];
          rec.on_state = [sink](long iter, const std::vector<double>& x) {
            sink->emplace_back(iter, x);
          };
        }
        out.traces[idx] = run(p, spec, iterations, seeds[idx], rec);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (worker_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (std::size_t i = 0; i < worker_count; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\n\r") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char ch : raw) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

namespace {

double metric_value(const TraceRecord& r, const std::string& name) {
  if (name == "dual_subopt") return r.dual_subopt;
  if (name == "rel_error") return r.rel_error;
  if (name == "L_t") return r.edge_gap_mean;
  if (name == "Delta_t") return r.gap_fraction;
  if (name == "mean_drift") return r.mean_drift;
  throw InvalidArgumentError("unknown metric " + name);
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) {
    out.close();
    std::error_code ec;
    std::filesystem::remove(path, ec);
    throw IoError("write to " + path.string() + " failed");
  }
}

json protocol_echo(const ExperimentConfig& cfg, const ProtocolSpec& spec) {
  json j;
  switch (spec.kind) {
    case ProtocolKind::Standard:
      j["type"] = "standard";
      break;
    case ProtocolKind::Binary: {
      j["type"] = "binary";
      json sched;
      switch (spec.schedule.kind) {
        case StepsizeSchedule::Kind::Constant:
          sched["type"] = "constant";
          sched["value"] = spec.schedule.a;
          break;
        case StepsizeSchedule::Kind::InverseT:
          sched["type"] = "inverse_t";
          sched["a"] = spec.schedule.a;
          break;
        case StepsizeSchedule::Kind::InverseSqrtT:
          sched["type"] = "inverse_sqrt_t";
          sched["a"] = spec.schedule.a;
          break;
        case StepsizeSchedule::Kind::FixedHorizonOptimal:
          sched["type"] = "fixed_horizon";
          sched["r"] = spec.schedule.horizon_r;
          sched["k"] = spec.schedule.horizon_k;
          break;
        case StepsizeSchedule::Kind::Adaptive:
          sched["type"] = "adaptive";
          sched["scale"] = spec.schedule.a;
          break;
      }
      j["schedule"] = std::move(sched);
      break;
    }
    case ProtocolKind::EpsGap:
      j["type"] = "eps_gap";
      j["eps"] = spec.eps;
      break;
    case ProtocolKind::Noise:
      j["type"] = "noise";
      j["sigma"] = spec.noise.sigma;
      j["phi"] = spec.noise.phi;
      if (cfg.protocol.noise.gamma) j["gamma"] = *cfg.protocol.noise.gamma;
      break;
  }
  return j;
}

}  // namespace

GraphInfo cmd_graph(const GraphConfig& cfg, const std::filesystem::path& out_path) {
  const Graph g = make_graph(cfg);
  const SpectralSummary s = spectral_summary(g);
  save_graph(g, out_path);
  GraphInfo info;
  info.n = g.node_count();
  info.m = g.edge_count();
  info.d_min = g.min_degree();
  info.alpha = s.alpha;
  info.beta = s.beta;
  return info;
}

RunArtifacts cmd_run(const ExperimentConfig& cfg) {
  Graph graph = make_graph(cfg.graph);
  std::vector<double> c = make_initial_values(cfg.initial_values, graph.node_count());
  const ConsensusProblem problem(std::move(graph), std::move(c));
  const ProtocolSpec spec = make_protocol(cfg.protocol, problem, cfg.iterations, cfg.track_dual);
  const long stride = resolve_stride(cfg.record_stride, cfg.iterations);
  RecordingOptions rec;
  rec.stride = stride;
  rec.gap_eps = cfg.gap_eps;
  const BatchResult batch =
      run_batch(problem, spec, cfg.iterations, cfg.seeds, rec, cfg.threads, cfg.dump_trajectories);

  const std::vector<long> marks = record_marks(cfg.iterations, stride);
  const std::size_t n_records = marks.size();
  const std::size_t n_seeds = cfg.seeds.size();

  // --- trace.csv: one row per (seed, recorded iteration), seeds in config order
  std::ostringstream csv;
  csv << "seed,iter";
  for (const std::string& name : cfg.metrics) csv << ',' << name;
  csv << '\n';
  for (std::size_t s = 0; s < n_seeds; ++s) {
    for (const TraceRecord& r : batch.traces[s].records) {
      csv << cfg.seeds[s] << ',' << r.iteration;
      for (const std::string& name : cfg.metrics) csv << ',' << format_double(metric_value(r, name));
      csv << '\n';
    }
  }

  // --- seed-averaged series (+ standard errors for the two headline metrics)
  std::map<std::string, std::vector<double>> mean_series;
  for (const std::string& name : cfg.metrics) {
    std::vector<double> mean(n_records, 0.0);
    for (std::size_t rix = 0; rix < n_records; ++rix) {
      double sum = 0.0;
      for (std::size_t s = 0; s < n_seeds; ++s) {
        sum += metric_value(batch.traces[s].records[rix], name);
      }
      mean[rix] = sum / static_cast<double>(n_seeds);
    }
    mean_series[name] = std::move(mean);
  }
  const auto standard_error = [&](const std::string& name) {
    std::vector<double> se(n_records, 0.0);
    if (n_seeds < 2) return se;
    const std::vector<double>& mean = mean_series.at(name);
    for (std::size_t rix = 0; rix < n_records; ++rix) {
      double sq = 0.0;
      for (std::size_t s = 0; s < n_seeds; ++s) {
        const double d = metric_value(batch.traces[s].records[rix], name) - mean[rix];
        sq += d * d;
      }
      se[rix] = std::sqrt(sq / static_cast<double>(n_seeds - 1)) /
                std::sqrt(static_cast<double>(n_seeds));
    }
    return se;
  };

  // --- matching theoretical bound on the same grid (eps-gap starts at k = 1)
  std::vector<long> bound_marks = marks;
  if (spec.kind == ProtocolKind::EpsGap) {
    std::erase_if(bound_marks, [](long k) { return k < 1; });
  }
  const BoundReport bounds = bound_report(problem, spec, bound_marks);

  const SpectralSummary spectrum = spectral_summary(problem.graph());
  json summary;
  summary["schema_version"] = 1;
  summary["graph"] = {{"n", problem.graph().node_count()},
                      {"m", problem.graph().edge_count()},
                      {"d_min", problem.graph().min_degree()},
                      {"alpha", spectrum.alpha},
                      {"beta", spectrum.beta}};
  summary["protocol"] = protocol_echo(cfg, spec);
  summary["iterations"] = cfg.iterations;
  summary["record_stride"] = stride;
  summary["seed_count"] = n_seeds;
  summary["seeds"] = cfg.seeds;
  summary["initial_dual_gap"] = problem.initial_dual_gap();
  summary["bound_measure"] = bounds.measure;

  json series;
  series["iter"] = marks;
  for (const std::string& name : cfg.metrics) {
    series["mean_" + name] = mean_series.at(name);
  }
  if (mean_series.count("dual_subopt")) series["se_dual_subopt"] = standard_error("dual_subopt");
  if (mean_series.count("L_t")) series["se_L_t"] = standard_error("L_t");
  {
    json curve = json::array();
    std::size_t next_bound = 0;
    for (long k : marks) {
      if (next_bound < bounds.iterations.size() && bounds.iterations[next_bound] == k) {
        curve.push_back(bounds.values[next_bound]);
        ++next_bound;
      } else {
        curve.push_back(nullptr);  // bound undefined here (eps-gap at k = 0)
      }
    }
    series["bound"] = std::move(curve);
  }
  summary["series"] = std::move(series);

  json final_block;
  final_block["iter"] = marks.back();
  for (const std::string& name : cfg.metrics) {
    final_block["mean_" + name] = mean_series.at(name).back();
  }
  if (mean_series.count("L_t")) {
    const std::vector<double>& curve = mean_series.at("L_t");
    const auto min_it = std::min_element(curve.begin(), curve.end());
    final_block["min_mean_L_t"] = *min_it;
    final_block["min_mean_L_t_iter"] = marks[static_cast<std::size_t>(min_it - curve.begin())];
  }
  summary["final"] = std::move(final_block);

  std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  RunArtifacts artifacts;
  artifacts.trace_csv = dir / "trace.csv";
  artifacts.summary_json = dir / "summary.json";
  write_text_file(artifacts.trace_csv, csv.str());
  write_text_file(artifacts.summary_json, summary.dump(2) + "\n");

  if (cfg.dump_trajectories) {
    std::ostringstream traj;
    traj << "seed,iter,node,value\n";
    for (std::size_t s = 0; s < n_seeds; ++s) {
      for (const auto& [iter, x] : batch.trajectories[s]) {
        for (std::size_t node = 0; node < x.size(); ++node) {
          traj << cfg.seeds[s] << ',' << iter << ',' << node << ',' << format_double(x[node])
               << '\n';
        }
      }
    }
    artifacts.trajectory_csv = dir / "trajectory.csv";
    write_text_file(*artifacts.trajectory_csv, traj.str());
  }
  return artifacts;
}

BoundsArtifacts cmd_bounds(const ExperimentConfig& cfg) {
  Graph graph = make_graph(cfg.graph);
  std::vector<double> c = make_initial_values(cfg.initial_values, graph.node_count());
  const ConsensusProblem problem(std::move(graph), std::move(c));
  const ProtocolSpec spec = make_protocol(cfg.protocol, problem, cfg.iterations, false);
  const long stride = resolve_stride(cfg.record_stride, cfg.iterations);
  std::vector<long> marks = record_marks(cfg.iterations, stride);
  if (spec.kind == ProtocolKind::EpsGap) {
    std::erase_if(marks, [](long k) { return k < 1; });
    if (marks.empty()) throw ConfigError("config: the eps-gap bound needs iterations >= 1");
  }

  BoundsArtifacts artifacts;
  artifacts.report = bound_report(problem, spec, marks);

  std::ostringstream csv;
  csv << "iter,bound\n";
  for (std::size_t i = 0; i < marks.size(); ++i) {
    csv << marks[i] << ',' << format_double(artifacts.report.values[i]) << '\n';
  }
  std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  artifacts.bounds_csv = dir / "bounds.csv";
  write_text_file(artifacts.bounds_csv, csv.str());
  return artifacts;
}

TraceTable read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  TraceTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + " is empty");
  std::stringstream header(line);
  std::string field;
  while (std::getline(header, field, ',')) table.columns.push_back(field);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::vector<double> values;
    while (std::getline(row, field, ',')) values.push_back(std::stod(field));
    if (values.size() != table.columns.size()) {
      throw IoError(path.string() + ": row with " + std::to_string(values.size()) +
                    " fields under a " + std::to_string(table.columns.size()) + "-column header");
    }
    table.rows.push_back(std::move(values));
  }
  return table;
}

}  // namespace gossip

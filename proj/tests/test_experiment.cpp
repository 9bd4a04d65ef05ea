#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gossip/errors.hpp"
#include "gossip/experiment.hpp"
#include "gossip/graph_io.hpp"

using namespace gossip;
using nlohmann::json;

namespace {

std::filesystem::path fresh_dir(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

json minimal_config() {
  return json{
      {"schema_version", 1},
      {"graph", {{"type", "cycle"}, {"n", 10}}},
      {"initial_values", {{"distribution", "uniform01"}, {"seed", 7}}},
      {"protocol", {{"type", "standard"}}},
      {"iterations", 100},
  };
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("minimal config fills in the documented defaults") {
  const ExperimentConfig cfg = parse_config(minimal_config());
  CHECK(cfg.graph.kind == GraphConfig::Kind::Cycle);
  CHECK(cfg.graph.n == 10);
  CHECK(cfg.iterations == 100);
  REQUIRE(cfg.seeds.size() == 50);
  CHECK(cfg.seeds.front() == 0);
  CHECK(cfg.seeds.back() == 49);
  CHECK(cfg.metrics == std::vector<std::string>{"dual_subopt", "rel_error", "L_t", "mean_drift"});
  CHECK_FALSE(cfg.gap_eps.has_value());
  CHECK(cfg.record_stride == 0);
  CHECK(cfg.output_dir == "out");
  CHECK_FALSE(cfg.track_dual);
  CHECK_FALSE(cfg.dump_trajectories);
  CHECK(cfg.threads == 0);
}

TEST_CASE("config rejection paths") {
  SUBCASE("unknown top-level key") {
    json doc = minimal_config();
    doc["extra"] = 1;
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
  }
  SUBCASE("schema version must be the integer 1") {
    json doc = minimal_config();
    doc["schema_version"] = 2;
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
    doc["schema_version"] = "1";
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
    doc.erase("schema_version");
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
  }
  SUBCASE("unknown nested keys") {
    json doc = minimal_config();
    doc["graph"]["radius"] = 0.5;  // cycle takes no radius
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
  }
  SUBCASE("bad graph type") {
    json doc = minimal_config();
    doc["graph"]["type"] = "torus";
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
  }
  SUBCASE("negative iterations") {
    json doc = minimal_config();
    doc["iterations"] = -5;
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
  }
  SUBCASE("initial values cannot mix explicit and sampled") {
    json doc = minimal_config();
    doc["initial_values"] = {{"values", {1.0, 2.0}}, {"seed", 3}};
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
  }
  SUBCASE("unknown distribution") {
    json doc = minimal_config();
    doc["initial_values"] = {{"distribution", "gaussian"}, {"seed", 3}};
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
  }
  SUBCASE("bad metric name and duplicates") {
    json doc = minimal_config();
    doc["metrics"] = {"dual_subopt", "banana"};
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
    doc["metrics"] = {"dual_subopt", "dual_subopt"};
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
    doc["metrics"] = json::array();
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
  }
  SUBCASE("gap fraction column needs a threshold") {
    json doc = minimal_config();
    doc["metrics"] = {"Delta_t"};
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
    doc["gap_eps"] = 0.05;
    CHECK_NOTHROW(parse_config(doc));
    doc["gap_eps"] = 0.0;
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
  }
  SUBCASE("noise wants exactly one of phi and gamma") {
    json doc = minimal_config();
    doc["protocol"] = {{"type", "noise"}, {"sigma", 0.1}};
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
    doc["protocol"] = {{"type", "noise"}, {"sigma", 0.1}, {"phi", 0.5}, {"gamma", 1.0}};
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
    doc["protocol"] = {{"type", "noise"}, {"sigma", 0.1}, {"phi", 0.5}};
    CHECK_NOTHROW(parse_config(doc));
  }
  SUBCASE("dual tracking is incompatible with the noise protocol") {
    json doc = minimal_config();
    doc["protocol"] = {{"type", "noise"}, {"sigma", 0.1}, {"phi", 0.5}};
    doc["track_dual"] = true;
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
  }
  SUBCASE("adaptive scale strings are restricted") {
    json doc = minimal_config();
    doc["protocol"] = {{"type", "binary"},
                       {"schedule", {{"type", "adaptive"}, {"scale", "one_over_n"}}}};
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
  }
  SUBCASE("seed shapes") {
    json doc = minimal_config();
    doc["seeds"] = json::array();
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
    doc["seeds"] = {{"base", 5}};  // count is required
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
    doc["seeds"] = {{"base", 5}, {"count", 0}};
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
    doc["seeds"] = -3;
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
  }
}

TEST_CASE("metric list is deduplicated into the canonical column order") {
  json doc = minimal_config();
  doc["gap_eps"] = 0.1;
  doc["metrics"] = {"mean_drift", "Delta_t", "dual_subopt"};
  const ExperimentConfig cfg = parse_config(doc);
  CHECK(cfg.metrics == std::vector<std::string>{"dual_subopt", "Delta_t", "mean_drift"});
}

TEST_CASE("eps-gap protocol provides the default gap threshold") {
  json doc = minimal_config();
  doc["protocol"] = {{"type", "eps_gap"}, {"eps", 0.02}};
  const ExperimentConfig cfg = parse_config(doc);
  REQUIRE(cfg.gap_eps.has_value());
  CHECK(*cfg.gap_eps == 0.02);
  CHECK(cfg.metrics ==
        std::vector<std::string>{"dual_subopt", "rel_error", "L_t", "Delta_t", "mean_drift"});
}

TEST_CASE("explicit seed lists and ranges") {
  json doc = minimal_config();
  doc["seeds"] = {9, 2, 5};
  CHECK(parse_config(doc).seeds == std::vector<std::uint64_t>{9, 2, 5});
  doc["seeds"] = {{"base", 100}, {"count", 3}};
  CHECK(parse_config(doc).seeds == std::vector<std::uint64_t>{100, 101, 102});
}

TEST_CASE("config loading from disk distinguishes io from syntax") {
  const auto dir = fresh_dir("gossip_cfg_io");
  const auto good = dir / "good.json";
  std::ofstream(good) << minimal_config().dump();
  CHECK(load_config(good).iterations == 100);

  CHECK_THROWS_AS(load_config(dir / "missing.json"), IoError);

  const auto bad = dir / "bad.json";
  std::ofstream(bad) << "{ nope";
  CHECK_THROWS_AS(load_config(bad), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("graph materialization") {
  GraphConfig cycle;
  cycle.kind = GraphConfig::Kind::Cycle;
  cycle.n = 8;
  CHECK(make_graph(cycle).edge_count() == 8);

  GraphConfig rgg;
  rgg.kind = GraphConfig::Kind::Rgg;
  rgg.n = 40;
  rgg.seed = 11;
  const Graph a = make_graph(rgg);  // default radius kicks in
  const Graph b = make_graph(rgg);
  CHECK(a.edges() == b.edges());

  const auto dir = fresh_dir("gossip_graph_file");
  const auto path = dir / "ring.json";
  save_graph(build_cycle(6), path);
  GraphConfig file;
  file.kind = GraphConfig::Kind::File;
  file.path = path.string();
  CHECK(make_graph(file).node_count() == 6);
  std::filesystem::remove_all(dir);
}

TEST_CASE("initial value materialization") {
  InitialValuesConfig sampled;
  sampled.seed = 42;
  const auto a = make_initial_values(sampled, 12);
  const auto b = make_initial_values(sampled, 12);
  CHECK(a == b);
  for (double v : a) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  InitialValuesConfig other;
  other.seed = 43;
  CHECK(make_initial_values(other, 12) != a);

  InitialValuesConfig fixed;
  fixed.values = {1.0, 2.0, 3.0};
  CHECK(make_initial_values(fixed, 3) == std::vector<double>{1.0, 2.0, 3.0});
  CHECK_THROWS_AS(make_initial_values(fixed, 4), ConfigError);
}

TEST_CASE("protocol materialization resolves the documented defaults") {
  const ConsensusProblem p(build_cycle(10), make_initial_values([] {
                             InitialValuesConfig c;
                             c.seed = 3;
                             return c;
                           }(), 10));

  SUBCASE("fixed horizon defaults to the exact gap and the run length") {
    ProtocolConfig cfg;
    cfg.kind = ProtocolKind::Binary;
    cfg.schedule.kind = StepsizeSchedule::Kind::FixedHorizonOptimal;
    const ProtocolSpec spec = make_protocol(cfg, p, 500, false);
    CHECK(spec.schedule.horizon_r == doctest::Approx(p.initial_dual_gap()).epsilon(1e-15));
    CHECK(spec.schedule.horizon_k == 500);
  }
  SUBCASE("adaptive scale rules") {
    ProtocolConfig cfg;
    cfg.kind = ProtocolKind::Binary;
    cfg.schedule.kind = StepsizeSchedule::Kind::Adaptive;
    cfg.schedule.scale_rule = "half_inverse_m";
    CHECK(make_protocol(cfg, p, 10, false).schedule.a == doctest::Approx(1.0 / 20.0));
    cfg.schedule.scale_rule = "quarter_inverse_m";
    CHECK(make_protocol(cfg, p, 10, false).schedule.a == doctest::Approx(1.0 / 40.0));
    cfg.schedule.scale_rule.clear();
    cfg.schedule.value = 0.125;
    CHECK(make_protocol(cfg, p, 10, false).schedule.a == doctest::Approx(0.125));
  }
  SUBCASE("scalar noise parameters broadcast per node") {
    ProtocolConfig cfg;
    cfg.kind = ProtocolKind::Noise;
    cfg.noise.sigma = {0.2};
    cfg.noise.phi = {0.6};
    const ProtocolSpec spec = make_protocol(cfg, p, 10, false);
    CHECK(spec.noise.sigma == std::vector<double>(10, 0.2));
    CHECK(spec.noise.phi == std::vector<double>(10, 0.6));
  }
  SUBCASE("gamma rule is applied against the graph") {
    ProtocolConfig cfg;
    cfg.kind = ProtocolKind::Noise;
    cfg.noise.sigma = {0.2};
    cfg.noise.gamma = 1.0;
    const ProtocolSpec spec = make_protocol(cfg, p, 10, false);
    CHECK(spec.noise.phi == phi_from_gamma(p.graph(), 1.0));
  }
  SUBCASE("wrong per-node length") {
    ProtocolConfig cfg;
    cfg.kind = ProtocolKind::Noise;
    cfg.noise.sigma = {0.2, 0.3};
    cfg.noise.phi = {0.6};
    CHECK_THROWS_AS(make_protocol(cfg, p, 10, false), ConfigError);
  }
}

TEST_CASE("stride resolution and the record grid") {
  CHECK(resolve_stride(7, 100) == 7);
  CHECK(resolve_stride(0, 10000) == 1);
  CHECK(resolve_stride(0, 10001) == 2);
  CHECK(resolve_stride(0, 45000) == 5);
  CHECK(resolve_stride(0, 1000000) == 100);

  CHECK(record_marks(10, 3) == std::vector<long>{0, 3, 6, 9, 10});
  CHECK(record_marks(9, 3) == std::vector<long>{0, 3, 6, 9});
  CHECK(record_marks(0, 1) == std::vector<long>{0});
  CHECK(record_marks(2, 5) == std::vector<long>{0, 2});
}

TEST_CASE("batch execution is independent of the worker count") {
  const ConsensusProblem p(build_cycle(10), make_initial_values([] {
                             InitialValuesConfig c;
                             c.seed = 5;
                             return c;
                           }(), 10));
  ProtocolSpec spec;
  spec.kind = ProtocolKind::Standard;
  const std::vector<std::uint64_t> seeds = {4, 1, 9, 2, 7};
  RecordingOptions rec;
  rec.stride = 10;

  const BatchResult serial = run_batch(p, spec, 300, seeds, rec, 1, false);
  const BatchResult parallel = run_batch(p, spec, 300, seeds, rec, 4, false);
  REQUIRE(serial.traces.size() == 5);
  REQUIRE(parallel.traces.size() == 5);
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const Trace solo = run(p, spec, 300, seeds[s], rec);
    CHECK(serial.traces[s].final_state.x == solo.final_state.x);
    CHECK(parallel.traces[s].final_state.x == solo.final_state.x);
    for (std::size_t r = 0; r < solo.records.size(); ++r) {
      CHECK(serial.traces[s].records[r].dual_subopt == solo.records[r].dual_subopt);
      CHECK(parallel.traces[s].records[r].dual_subopt == solo.records[r].dual_subopt);
    }
  }

  ProtocolSpec broken;
  broken.kind = ProtocolKind::EpsGap;  // eps left at zero
  CHECK_THROWS_AS(run_batch(p, broken, 10, seeds, rec, 4, false), InvalidArgumentError);
  CHECK_THROWS_AS(run_batch(p, spec, 10, {}, rec, 1, false), InvalidArgumentError);
}

TEST_CASE("full run writes deterministic artifacts") {
  const auto dir = fresh_dir("gossip_cmd_run");
  json doc = minimal_config();
  doc["seeds"] = {{"base", 0}, {"count", 4}};
  doc["iterations"] = 200;
  doc["record_stride"] = 50;
  doc["output_dir"] = (dir / "out").string();
  doc["threads"] = 2;

  const ExperimentConfig cfg = parse_config(doc);
  const RunArtifacts first = cmd_run(cfg);
  REQUIRE(std::filesystem::exists(first.trace_csv));
  REQUIRE(std::filesystem::exists(first.summary_json));
  CHECK_FALSE(first.trajectory_csv.has_value());

  const std::string trace_one = read_file(first.trace_csv);
  const std::string summary_one = read_file(first.summary_json);
  const RunArtifacts second = cmd_run(cfg);
  CHECK(read_file(second.trace_csv) == trace_one);
  CHECK(read_file(second.summary_json) == summary_one);

  // header carries the configured metric columns in canonical order
  std::istringstream lines(trace_one);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "seed,iter,dual_subopt,rel_error,L_t,mean_drift");

  const TraceTable table = read_trace_csv(first.trace_csv);
  CHECK(table.columns.size() == 6);
  CHECK(table.rows.size() == 4 * 5);  // 4 seeds x marks {0,50,100,150,200}

  const json summary = json::parse(summary_one);
  CHECK(summary.at("schema_version") == 1);
  CHECK(summary.at("graph").at("n") == 10);
  CHECK(summary.at("graph").at("m") == 10);
  CHECK(summary.at("seed_count") == 4);
  CHECK(summary.at("record_stride") == 50);
  CHECK(summary.at("bound_measure") == "expected_dual_suboptimality");
  const json& series = summary.at("series");
  REQUIRE(series.at("iter").size() == 5);
  CHECK(series.at("mean_dual_subopt").size() == 5);
  CHECK(series.at("se_dual_subopt").size() == 5);
  CHECK(series.at("bound").size() == 5);
  CHECK(series.at("bound")[0].is_number());
  // the bound at iteration zero is the exact initial gap
  CHECK(series.at("bound")[0].get<double>() ==
        doctest::Approx(summary.at("initial_dual_gap").get<double>()).epsilon(1e-13));
  CHECK(summary.at("final").contains("min_mean_L_t"));
  CHECK(summary.at("final").contains("min_mean_L_t_iter"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("eps-gap run leaves the undefined bound entry null") {
  const auto dir = fresh_dir("gossip_cmd_run_eps");
  json doc = minimal_config();
  doc["protocol"] = {{"type", "eps_gap"}, {"eps", 0.05}};
  doc["seeds"] = {{"base", 1}, {"count", 3}};
  doc["iterations"] = 40;
  doc["record_stride"] = 20;
  doc["output_dir"] = (dir / "out").string();

  const RunArtifacts artifacts = cmd_run(parse_config(doc));
  const json summary = json::parse(read_file(artifacts.summary_json));
  const json& bound = summary.at("series").at("bound");
  REQUIRE(bound.size() == 3);  // marks 0, 20, 40
  CHECK(bound[0].is_null());
  CHECK(bound[1].is_number());
  CHECK(summary.at("bound_measure") == "expected_average_gap_fraction");

  // Delta_t was implied by the protocol
  std::istringstream lines(read_file(artifacts.trace_csv));
  std::string header;
  std::getline(lines, header);
  CHECK(header == "seed,iter,dual_subopt,rel_error,L_t,Delta_t,mean_drift");
  std::filesystem::remove_all(dir);
}

TEST_CASE("trajectory dump carries every node at every recorded mark") {
  const auto dir = fresh_dir("gossip_cmd_run_traj");
  json doc = minimal_config();
  doc["graph"] = {{"type", "cycle"}, {"n", 4}};
  doc["initial_values"] = {{"values", {0.0, 1.0, 2.0, 3.0}}};
  doc["seeds"] = {8};
  doc["iterations"] = 6;
  doc["record_stride"] = 3;
  doc["dump_trajectories"] = true;
  doc["output_dir"] = (dir / "out").string();

  const RunArtifacts artifacts = cmd_run(parse_config(doc));
  REQUIRE(artifacts.trajectory_csv.has_value());
  const TraceTable table = read_trace_csv(*artifacts.trajectory_csv);
  CHECK(table.columns == std::vector<std::string>{"seed", "iter", "node", "value"});
  CHECK(table.rows.size() == 3 * 4);  // marks {0,3,6} x 4 nodes
  // the first four rows are the initial values
  for (int node = 0; node < 4; ++node) {
    CHECK(table.rows[static_cast<std::size_t>(node)][3] == doctest::Approx(node));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("bounds command writes the curve without simulating") {
  const auto dir = fresh_dir("gossip_cmd_bounds");
  json doc = minimal_config();
  doc["iterations"] = 100;
  doc["record_stride"] = 25;
  doc["output_dir"] = (dir / "out").string();

  const BoundsArtifacts artifacts = cmd_bounds(parse_config(doc));
  REQUIRE(std::filesystem::exists(artifacts.bounds_csv));
  CHECK(artifacts.report.measure == "expected_dual_suboptimality");
  const TraceTable table = read_trace_csv(artifacts.bounds_csv);
  CHECK(table.columns == std::vector<std::string>{"iter", "bound"});
  REQUIRE(table.rows.size() == 5);
  CHECK(table.rows[0][0] == 0.0);
  CHECK(table.rows[0][1] == doctest::Approx(artifacts.report.values[0]));

  // the eps-gap guarantee needs at least one iteration
  doc["protocol"] = {{"type", "eps_gap"}, {"eps", 0.1}};
  doc["iterations"] = 0;
  CHECK_THROWS_AS(cmd_bounds(parse_config(doc)), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("double formatting survives a parse round trip") {
  RngStream rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.uniform01() - 0.5) * std::pow(10.0, rng.uniform_index(17) - 8);
    const std::string text = format_double(v);
    CHECK(std::strtod(text.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("csv escaping") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("line\nbreak") == "\"line\nbreak\"");
}

TEST_CASE("trace csv reader validates its input") {
  const auto dir = fresh_dir("gossip_trace_reader");
  const auto path = dir / "t.csv";
  std::ofstream(path) << "a,b\n1,2\n3\n";
  CHECK_THROWS_AS(read_trace_csv(path), IoError);
  CHECK_THROWS_AS(read_trace_csv(dir / "missing.csv"), IoError);
  std::filesystem::remove_all(dir);
}

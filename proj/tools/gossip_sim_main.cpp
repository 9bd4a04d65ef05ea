// gossip-sim: command line front end for the gossip consensus toolkit.
//
//   gossip-sim graph   build a cycle or random geometric graph and save it
//   gossip-sim run     execute a configured multi-seed experiment
//   gossip-sim bounds  evaluate the matching theoretical bound, no simulation
//
// Exit codes: 0 ok, 2 invalid configuration or arguments, 3 I/O failure.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gossip/errors.hpp"
#include "gossip/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

int do_graph(const std::string& type, int n, double radius, bool radius_set,
             std::uint64_t seed, const std::string& out) {
  gossip::GraphConfig cfg;
  if (type == "cycle") {
    cfg.kind = gossip::GraphConfig::Kind::Cycle;
  } else if (type == "rgg") {
    cfg.kind = gossip::GraphConfig::Kind::Rgg;
    if (radius_set) cfg.radius = radius;
    cfg.seed = seed;
  } else {
    throw gossip::ConfigError("graph type must be \"cycle\" or \"rgg\"");
  }
  cfg.n = n;
  const gossip::GraphInfo info = gossip::cmd_graph(cfg, out);
  std::printf("n=%d m=%d alpha=%s beta=%s d_min=%d\n", info.n, info.m,
              gossip::format_double(info.alpha).c_str(),
              gossip::format_double(info.beta).c_str(), info.d_min);
  std::printf("saved %s\n", out.c_str());
  return 0;
}

int do_run(const std::string& config_path) {
  const gossip::ExperimentConfig cfg = gossip::load_config(config_path);
  const gossip::RunArtifacts artifacts = gossip::cmd_run(cfg);
  std::printf("wrote %s\n", artifacts.trace_csv.string().c_str());
  std::printf("wrote %s\n", artifacts.summary_json.string().c_str());
  if (artifacts.trajectory_csv) {
    std::printf("wrote %s\n", artifacts.trajectory_csv->string().c_str());
  }
  return 0;
}

int do_bounds(const std::string& config_path) {
  const gossip::ExperimentConfig cfg = gossip::load_config(config_path);
  const gossip::BoundsArtifacts artifacts = gossip::cmd_bounds(cfg);
  std::printf("# bound on %s\n", artifacts.report.measure.c_str());
  std::printf("iter,bound\n");
  for (std::size_t i = 0; i < artifacts.report.iterations.size(); ++i) {
    std::printf("%ld,%s\n", artifacts.report.iterations[i],
                gossip::format_double(artifacts.report.values[i]).c_str());
  }
  std::fprintf(stderr, "wrote %s\n", artifacts.bounds_csv.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized gossip consensus simulator and bound calculator"};
  app.require_subcommand(1);

  // graph
  auto* graph_cmd = app.add_subcommand("graph", "Build and save a graph");
  std::string graph_type = "cycle";
  int graph_n = 0;
  double graph_r = 0.0;
  std::uint64_t graph_seed = 0;
  std::string graph_out = "graph.txt";
  graph_cmd->add_option("--type", graph_type, "cycle or rgg")->required();
  graph_cmd->add_option("--n", graph_n, "number of nodes")->required();
  auto* radius_opt = graph_cmd->add_option("--r", graph_r, "rgg radius (default sqrt(log n / n))");
  graph_cmd->add_option("--seed", graph_seed, "rgg layout seed");
  graph_cmd->add_option("--out", graph_out, "output path (.json = structured form)");

  // run
  auto* run_cmd = app.add_subcommand("run", "Run a configured experiment");
  std::string run_config;
  run_cmd->add_option("--config", run_config, "experiment config (JSON)")->required();

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate the theoretical bound curve");
  std::string bounds_config;
  bounds_cmd->add_option("--config", bounds_config, "experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (graph_cmd->parsed()) {
      return do_graph(graph_type, graph_n, graph_r, radius_opt->count() > 0, graph_seed, graph_out);
    }
    if (run_cmd->parsed()) return do_run(run_config);
    if (bounds_cmd->parsed()) return do_bounds(bounds_config);
  } catch (const gossip::IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kExitIo;
  } catch (const gossip::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return 0;
}

#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "gossip/graph_io.hpp"

using nlohmann::json;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

// Runs the installed binary with the given arguments, capturing stdout.
CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(GOSSIP_SIM_BINARY) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult result;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) result.out += buf;
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::filesystem::path fresh_dir(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

json small_config(const std::filesystem::path& out_dir) {
  return json{
      {"schema_version", 1},
      {"graph", {{"type", "cycle"}, {"n", 10}}},
      {"initial_values", {{"distribution", "uniform01"}, {"seed", 7}}},
      {"protocol", {{"type", "standard"}}},
      {"iterations", 50},
      {"seeds", {{"base", 0}, {"count", 3}}},
      {"record_stride", 25},
      {"output_dir", out_dir.string()},
  };
}

}  // namespace

TEST_CASE("graph subcommand builds, reports and saves") {
  const auto dir = fresh_dir("gossip_cli_graph");
  const auto out = dir / "ring.json";
  const CmdResult r = run_cli("graph --type cycle --n 10 --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("n=10 m=10") != std::string::npos);
  CHECK(r.out.find("alpha=0.38196601125010") != std::string::npos);
  CHECK(r.out.find("d_min=2") != std::string::npos);
  CHECK(r.out.find("saved " + out.string()) != std::string::npos);
  const gossip::Graph g = gossip::load_graph(out);
  CHECK(g.node_count() == 10);

  const auto rgg_out = dir / "net.json";
  const CmdResult rgg =
      run_cli("graph --type rgg --n 30 --seed 3 --out " + rgg_out.string());
  CHECK(rgg.exit_code == 0);
  CHECK(gossip::load_graph(rgg_out).coordinates().has_value());
  std::filesystem::remove_all(dir);
}

TEST_CASE("run subcommand produces the experiment artifacts") {
  const auto dir = fresh_dir("gossip_cli_run");
  const auto cfg_path = dir / "experiment.json";
  std::ofstream(cfg_path) << small_config(dir / "out").dump(2);

  const CmdResult r = run_cli("run --config " + cfg_path.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("wrote ") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "out" / "trace.csv"));
  CHECK(std::filesystem::exists(dir / "out" / "summary.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("bounds subcommand prints the curve") {
  const auto dir = fresh_dir("gossip_cli_bounds");
  const auto cfg_path = dir / "experiment.json";
  std::ofstream(cfg_path) << small_config(dir / "out").dump(2);

  const CmdResult r = run_cli("bounds --config " + cfg_path.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("# bound on expected_dual_suboptimality") != std::string::npos);
  CHECK(r.out.find("iter,bound") != std::string::npos);
  CHECK(r.out.find("\n0,") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "out" / "bounds.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("exit codes distinguish configuration from io failures") {
  const auto dir = fresh_dir("gossip_cli_errors");

  SUBCASE("help is not an error") {
    CHECK(run_cli("--help").exit_code == 0);
  }
  SUBCASE("unknown arguments") {
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("run").exit_code == 2);  // --config is required
    CHECK(run_cli("graph --type cycle").exit_code == 2);
  }
  SUBCASE("domain validation") {
    CHECK(run_cli("graph --type cycle --n 2 --out " + (dir / "g.txt").string()).exit_code == 2);
    CHECK(run_cli("graph --type mesh --n 5 --out " + (dir / "g.txt").string()).exit_code == 2);
  }
  SUBCASE("bad config content") {
    const auto cfg_path = dir / "broken.json";
    json doc = small_config(dir / "out");
    doc["surprise"] = true;
    std::ofstream(cfg_path) << doc.dump();
    CHECK(run_cli("run --config " + cfg_path.string()).exit_code == 2);

    std::ofstream(cfg_path) << "{ nope";
    CHECK(run_cli("run --config " + cfg_path.string()).exit_code == 2);
  }
  SUBCASE("missing files are io failures") {
    CHECK(run_cli("run --config " + (dir / "nowhere.json").string()).exit_code == 3);
    CHECK(run_cli("bounds --config " + (dir / "nowhere.json").string()).exit_code == 3);
    const auto impossible = dir / "no_such_subdir" / "g.txt";
    CHECK(run_cli("graph --type cycle --n 5 --out " + impossible.string()).exit_code == 3);
  }
  std::filesystem::remove_all(dir);
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gossip/bounds.hpp"
#include "gossip/errors.hpp"
#include "gossip/experiment.hpp"
#include "gossip/graph_io.hpp"
#include "gossip/protocols.hpp"

namespace py = pybind11;

namespace {

std::vector<std::pair<int, int>> edge_pairs(const gossip::Graph& g) {
  std::vector<std::pair<int, int>> out;
  out.reserve(g.edges().size());
  for (const gossip::Edge& e : g.edges()) out.emplace_back(e.u, e.v);
  return out;
}

std::optional<std::vector<std::pair<double, double>>> coordinate_pairs(const gossip::Graph& g) {
  if (!g.coordinates()) return std::nullopt;
  std::vector<std::pair<double, double>> out;
  for (const gossip::Point2& p : *g.coordinates()) out.emplace_back(p.x, p.y);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Randomized gossip consensus: protocols, measures and rate bounds";

  // Exception hierarchy; the base translator is registered first so the
  // specific ones (registered later) get the first chance to match.
  auto base = py::register_exception<gossip::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<gossip::InvalidTopologyError>(m, "InvalidTopologyError", base.ptr());
  py::register_exception<gossip::UnconnectedGraphError>(m, "UnconnectedGraphError", base.ptr());
  py::register_exception<gossip::DisconnectedGraphError>(m, "DisconnectedGraphError", base.ptr());
  py::register_exception<gossip::InvalidArgumentError>(m, "InvalidArgumentError", base.ptr());
  py::register_exception<gossip::ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<gossip::IoError>(m, "IoError", base.ptr());

  // ---- graphs
  py::class_<gossip::Graph>(m, "Graph")
      .def_static(
          "from_edges",
          [](int n, const std::vector<std::pair<int, int>>& edges) {
            std::vector<gossip::Edge> list;
            list.reserve(edges.size());
            for (const auto& [u, v] : edges) list.push_back({u, v});
            return gossip::Graph::from_edges(n, std::move(list));
          },
          py::arg("node_count"), py::arg("edges"))
      .def_property_readonly("node_count", &gossip::Graph::node_count)
      .def_property_readonly("edge_count", &gossip::Graph::edge_count)
      .def_property_readonly("edges", &edge_pairs)
      .def_property_readonly("degrees",
                             [](const gossip::Graph& g) { return g.degrees(); })
      .def_property_readonly("min_degree", &gossip::Graph::min_degree)
      .def_property_readonly("coordinates", &coordinate_pairs)
      .def("__repr__", [](const gossip::Graph& g) {
        return "<Graph n=" + std::to_string(g.node_count()) +
               " m=" + std::to_string(g.edge_count()) + ">";
      });

  m.def("build_cycle", &gossip::build_cycle, py::arg("n"));
  m.def("default_rgg_radius", &gossip::default_rgg_radius, py::arg("n"));
  m.def("build_random_geometric", &gossip::build_random_geometric, py::arg("n"),
        py::arg("radius"), py::arg("seed"));
  m.def("incidence_row", &gossip::incidence_row, py::arg("graph"), py::arg("edge"));
  m.def("laplacian_dense", &gossip::laplacian_dense, py::arg("graph"));

  py::class_<gossip::SpectralSummary>(m, "SpectralSummary")
      .def_readonly("alpha", &gossip::SpectralSummary::alpha)
      .def_readonly("beta", &gossip::SpectralSummary::beta)
      .def_readonly("laplacian_eigenvalues", &gossip::SpectralSummary::laplacian_eigenvalues);
  m.def("spectral_summary", &gossip::spectral_summary, py::arg("graph"));

  m.def("save_graph", &gossip::save_graph, py::arg("graph"), py::arg("path"));
  m.def("load_graph", &gossip::load_graph, py::arg("path"));
  m.def("to_edge_list_text", &gossip::to_edge_list_text, py::arg("graph"));
  m.def("graph_from_edge_list_text", &gossip::graph_from_edge_list_text, py::arg("text"));

  // ---- consensus problem and measures
  py::class_<gossip::ConsensusProblem>(m, "ConsensusProblem")
      .def(py::init<gossip::Graph, std::vector<double>>(), py::arg("graph"),
           py::arg("initial_values"))
      .def_property_readonly("graph", &gossip::ConsensusProblem::graph,
                             py::return_value_policy::reference_internal)
      .def_property_readonly("initial_values", &gossip::ConsensusProblem::initial_values)
      .def_property_readonly("mean_value", &gossip::ConsensusProblem::mean_value)
      .def_property_readonly("initial_dual_gap", &gossip::ConsensusProblem::initial_dual_gap);

  m.def("dual_value", &gossip::dual_value, py::arg("problem"), py::arg("y"));
  m.def("map_to_primal", &gossip::map_to_primal, py::arg("problem"), py::arg("y"));
  m.def("dual_suboptimality", &gossip::dual_suboptimality, py::arg("problem"), py::arg("x"));
  m.def("edge_gap_sum", &gossip::edge_gap_sum, py::arg("graph"), py::arg("x"));
  m.def("edge_gap_measure", &gossip::edge_gap_measure, py::arg("graph"), py::arg("x"));
  m.def("gap_fraction", &gossip::gap_fraction, py::arg("graph"), py::arg("x"), py::arg("eps"));
  m.def("relative_error", &gossip::relative_error, py::arg("problem"), py::arg("x"));
  m.def("dual_increment", &gossip::dual_increment, py::arg("problem"), py::arg("x"),
        py::arg("edge"), py::arg("lam"));

  // ---- protocols
  py::class_<gossip::RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("raw", &gossip::RngStream::raw)
      .def("uniform_index", &gossip::RngStream::uniform_index, py::arg("m"))
      .def("uniform01", &gossip::RngStream::uniform01)
      .def("standard_normal", &gossip::RngStream::standard_normal);

  m.def("sample_edge", &gossip::sample_edge, py::arg("graph"), py::arg("rng"));

  py::class_<gossip::NoiseParams>(m, "NoiseParams")
      .def(py::init<>())
      .def_static("uniform", &gossip::NoiseParams::uniform, py::arg("n"), py::arg("sigma"),
                  py::arg("phi"))
      .def_readwrite("sigma", &gossip::NoiseParams::sigma)
      .def_readwrite("phi", &gossip::NoiseParams::phi);

  m.def("phi_from_gamma", &gossip::phi_from_gamma, py::arg("graph"), py::arg("gamma"));

  py::class_<gossip::StepsizeSchedule>(m, "StepsizeSchedule")
      .def_static("constant", &gossip::StepsizeSchedule::constant, py::arg("lambda0"))
      .def_static("inverse_t", &gossip::StepsizeSchedule::inverse_t, py::arg("a"))
      .def_static("inverse_sqrt_t", &gossip::StepsizeSchedule::inverse_sqrt_t, py::arg("a"))
      .def_static("fixed_horizon_optimal", &gossip::StepsizeSchedule::fixed_horizon_optimal,
                  py::arg("r"), py::arg("k"))
      .def_static("adaptive", &gossip::StepsizeSchedule::adaptive, py::arg("scale"))
      .def("value", &gossip::StepsizeSchedule::value, py::arg("t"), py::arg("edge_gap_sum") = 0.0);

  py::enum_<gossip::ProtocolKind>(m, "ProtocolKind")
      .value("Standard", gossip::ProtocolKind::Standard)
      .value("Binary", gossip::ProtocolKind::Binary)
      .value("EpsGap", gossip::ProtocolKind::EpsGap)
      .value("Noise", gossip::ProtocolKind::Noise);

  py::class_<gossip::ProtocolSpec>(m, "ProtocolSpec")
      .def(py::init<>())
      .def_readwrite("kind", &gossip::ProtocolSpec::kind)
      .def_readwrite("schedule", &gossip::ProtocolSpec::schedule)
      .def_readwrite("eps", &gossip::ProtocolSpec::eps)
      .def_readwrite("noise", &gossip::ProtocolSpec::noise)
      .def_readwrite("track_dual", &gossip::ProtocolSpec::track_dual);

  py::class_<gossip::ProtocolState>(m, "ProtocolState")
      .def_static("standard_start", &gossip::ProtocolState::standard_start, py::arg("problem"),
                  py::arg("track_dual"))
      .def_static("noise_start", &gossip::ProtocolState::noise_start, py::arg("problem"))
      .def_readwrite("x", &gossip::ProtocolState::x)
      .def_readonly("y", &gossip::ProtocolState::y)
      .def_readonly("iteration", &gossip::ProtocolState::iteration)
      .def_readonly("noise_counters", &gossip::ProtocolState::noise_counters)
      .def_readonly("outstanding_noise", &gossip::ProtocolState::outstanding_noise)
      .def("outstanding_noise_total", &gossip::ProtocolState::outstanding_noise_total);

  m.def("step_standard", &gossip::step_standard, py::arg("state"), py::arg("graph"),
        py::arg("edge"));
  m.def("step_binary", &gossip::step_binary, py::arg("state"), py::arg("graph"), py::arg("edge"),
        py::arg("lam"));
  m.def("step_eps_gap", &gossip::step_eps_gap, py::arg("state"), py::arg("graph"), py::arg("edge"),
        py::arg("eps"));
  m.def("step_noise", &gossip::step_noise, py::arg("state"), py::arg("graph"), py::arg("edge"),
        py::arg("params"), py::arg("rng"));

  py::class_<gossip::TraceRecord>(m, "TraceRecord")
      .def_readonly("iteration", &gossip::TraceRecord::iteration)
      .def_readonly("dual_subopt", &gossip::TraceRecord::dual_subopt)
      .def_readonly("rel_error", &gossip::TraceRecord::rel_error)
      .def_readonly("edge_gap_mean", &gossip::TraceRecord::edge_gap_mean)
      .def_readonly("gap_fraction", &gossip::TraceRecord::gap_fraction)
      .def_readonly("mean_drift", &gossip::TraceRecord::mean_drift);

  py::class_<gossip::Trace>(m, "Trace")
      .def_readonly("records", &gossip::Trace::records)
      .def_readonly("final_state", &gossip::Trace::final_state)
      .def_readonly("has_gap_fraction", &gossip::Trace::has_gap_fraction)
      .def_readonly("stepsize_sum", &gossip::Trace::stepsize_sum)
      .def_readonly("stepsize_sq_sum", &gossip::Trace::stepsize_sq_sum)
      .def_readonly("min_edge_gap_mean", &gossip::Trace::min_edge_gap_mean)
      .def_readonly("min_edge_gap_iteration", &gossip::Trace::min_edge_gap_iteration);

  m.def(
      "run",
      [](const gossip::ConsensusProblem& p, const gossip::ProtocolSpec& spec, long iterations,
         std::uint64_t seed, long stride, std::optional<double> gap_eps) {
        gossip::RecordingOptions rec;
        rec.stride = stride;
        rec.gap_eps = gap_eps;
        return gossip::run(p, spec, iterations, seed, rec);
      },
      py::arg("problem"), py::arg("spec"), py::arg("iterations"), py::arg("seed"),
      py::arg("stride") = 1, py::arg("gap_eps") = std::nullopt);

  // ---- rate bounds
  m.def("standard_bound", &gossip::standard_bound, py::arg("problem"), py::arg("k"));
  m.def("binary_bound_u", &gossip::binary_bound_u, py::arg("d_gap"), py::arg("schedule"),
        py::arg("k"));
  m.def("adaptive_binary_bound", &gossip::adaptive_binary_bound, py::arg("problem"), py::arg("k"));
  m.def("eps_gap_bound", &gossip::eps_gap_bound, py::arg("d_gap"), py::arg("k"), py::arg("eps"));
  m.def("expected_phi_power", &gossip::expected_phi_power, py::arg("degree"),
        py::arg("edge_count"), py::arg("phi"), py::arg("t"));
  m.def("noise_psi", &gossip::noise_psi, py::arg("graph"), py::arg("params"), py::arg("t"));
  m.def("noise_bound", &gossip::noise_bound, py::arg("problem"), py::arg("params"), py::arg("k"));

  py::class_<gossip::NoiseThresholdReport>(m, "NoiseThresholdReport")
      .def_readonly("rho", &gossip::NoiseThresholdReport::rho)
      .def_readonly("decay_factors", &gossip::NoiseThresholdReport::decay_factors)
      .def_readonly("noise_dominated", &gossip::NoiseThresholdReport::noise_dominated)
      .def_readonly("slowest_nodes", &gossip::NoiseThresholdReport::slowest_nodes);
  m.def("noise_threshold_check", &gossip::noise_threshold_check, py::arg("graph"),
        py::arg("params"));

  py::class_<gossip::BoundReport>(m, "BoundReport")
      .def_readonly("protocol", &gossip::BoundReport::protocol)
      .def_readonly("measure", &gossip::BoundReport::measure)
      .def_readonly("iterations", &gossip::BoundReport::iterations)
      .def_readonly("values", &gossip::BoundReport::values)
      .def_readonly("alpha", &gossip::BoundReport::alpha)
      .def_readonly("rho", &gossip::BoundReport::rho)
      .def_readonly("initial_gap", &gossip::BoundReport::initial_gap)
      .def_readonly("stepsize_sum", &gossip::BoundReport::stepsize_sum)
      .def_readonly("stepsize_sq_sum", &gossip::BoundReport::stepsize_sq_sum);
  m.def("bound_report", &gossip::bound_report, py::arg("problem"), py::arg("spec"),
        py::arg("iterations"));

  // ---- experiment harness passthrough
  m.def(
      "run_experiment",
      [](const std::filesystem::path& config_path) {
        const gossip::RunArtifacts a = gossip::cmd_run(gossip::load_config(config_path));
        py::dict out;
        out["trace_csv"] = a.trace_csv.string();
        out["summary_json"] = a.summary_json.string();
        if (a.trajectory_csv) out["trajectory_csv"] = a.trajectory_csv->string();
        return out;
      },
      py::arg("config_path"));

  m.attr("__version__") = "0.1.0";
}

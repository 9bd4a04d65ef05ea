"""Randomized gossip consensus toolkit.

Thin Python surface over the C++ core: graph construction, the four gossip
protocols (standard, binary oracle, eps-gap oracle, controlled noise
insertion), convergence measures and the matching theoretical rate bounds.
"""

from ._core import (
    BoundReport,
    ConfigError,
    ConsensusProblem,
    DisconnectedGraphError,
    Error,
    Graph,
    InvalidArgumentError,
    InvalidTopologyError,
    IoError,
    NoiseParams,
    NoiseThresholdReport,
    ProtocolKind,
    ProtocolSpec,
    ProtocolState,
    RngStream,
    SpectralSummary,
    StepsizeSchedule,
    Trace,
    TraceRecord,
    UnconnectedGraphError,
    __version__,
    adaptive_binary_bound,
    binary_bound_u,
    bound_report,
    build_cycle,
    build_random_geometric,
    default_rgg_radius,
    dual_increment,
    dual_suboptimality,
    dual_value,
    edge_gap_measure,
    edge_gap_sum,
    eps_gap_bound,
    expected_phi_power,
    gap_fraction,
    graph_from_edge_list_text,
    incidence_row,
    laplacian_dense,
    load_graph,
    map_to_primal,
    noise_bound,
    noise_psi,
    noise_threshold_check,
    phi_from_gamma,
    relative_error,
    run,
    run_experiment,
    sample_edge,
    save_graph,
    spectral_summary,
    standard_bound,
    step_binary,
    step_eps_gap,
    step_noise,
    step_standard,
    to_edge_list_text,
)

__all__ = [
    "BoundReport",
    "ConfigError",
    "ConsensusProblem",
    "DisconnectedGraphError",
    "Error",
    "Graph",
    "InvalidArgumentError",
    "InvalidTopologyError",
    "IoError",
    "NoiseParams",
    "NoiseThresholdReport",
    "ProtocolKind",
    "ProtocolSpec",
    "ProtocolState",
    "RngStream",
    "SpectralSummary",
    "StepsizeSchedule",
    "Trace",
    "TraceRecord",
    "UnconnectedGraphError",
    "__version__",
    "adaptive_binary_bound",
    "binary_bound_u",
    "bound_report",
    "build_cycle",
    "build_random_geometric",
    "default_rgg_radius",
    "dual_increment",
    "dual_suboptimality",
    "dual_value",
    "edge_gap_measure",
    "edge_gap_sum",
    "eps_gap_bound",
    "expected_phi_power",
    "gap_fraction",
    "graph_from_edge_list_text",
    "incidence_row",
    "laplacian_dense",
    "load_graph",
    "map_to_primal",
    "noise_bound",
    "noise_psi",
    "noise_threshold_check",
    "phi_from_gamma",
    "relative_error",
    "run",
    "run_experiment",
    "sample_edge",
    "save_graph",
    "spectral_summary",
    "standard_bound",
    "step_binary",
    "step_eps_gap",
    "step_noise",
    "step_standard",
    "to_edge_list_text",
]

"""Agent-based land-use model with a socio-psychological decision layer.

Land users on a capital landscape choose among functional types by comparing
utility gains against a giving-in threshold that blends social norms,
attitude, and inertia. The package covers landscape generation, the social
network, the simulation engine, landscape metrics, variance-based
sensitivity analysis, and a CSV-emitting CLI.
"""

from .behaviour import (
    BehaviourGlobals,
    BehaviouralProfile,
    attitude_effect,
    clip_social,
    evaluate_transition,
    giving_in_threshold,
    influence_score,
    social_influence,
)
from .config import (
    ExperimentConfig,
    SobolSettings,
    SweepParam,
    SweepSpec,
    apply_values,
    load_config,
    loads_config,
    save_config,
    serialize_config,
)
from .dynamics import (
    AttitudeSchedule,
    DemandState,
    SimulationState,
    TickReport,
    apply_attitude_schedule,
    run_schedule,
    run_until_stable,
    selection_count,
    tick,
    unit_benefit,
    utility,
)
from .errors import (
    ConfigurationError,
    DegenerateVarianceError,
    InvalidTransitionError,
    UndefinedFractionError,
)
from .fileio import (
    METRICS_HEADER,
    fmt,
    metrics_line,
    read_map_csv,
    trajectory_lines,
    write_capitals_csv,
    write_design_csv,
    write_edges_csv,
    write_indices_json,
    write_map_csv,
    write_metrics_csv,
    write_sweep_csv,
    write_trajectory_csv,
)
from .experiments import (
    OUTPUT_METRICS,
    RunResult,
    build_state,
    evaluate_design,
    recompute_metrics,
    run_hysteresis,
    run_replicates,
    run_single,
    run_sobol,
    run_sweep,
    sweep_points,
)
from .landscape import (
    CONSERVATION,
    DEFAULT_AFTS,
    HIGH_INTENSITY,
    MEDIUM_INTENSITY,
    AgentFunctionalType,
    Cell,
    LandscapeGrid,
    build_grid,
    default_peaks,
    generate_capitals,
    init_land_use,
    production,
)
from .metrics import (
    PatchDecomposition,
    RunSummary,
    Trajectory,
    intensity_shares,
    mesh_connectivity,
    patch_decomposition,
    share_trajectory_summary,
    total_supply,
)
from .network import (
    NetworkConfig,
    SocialNetwork,
    add_teleconnections,
    build_lattice,
    build_network,
    neighbour_intensity_fraction,
)
from .sensitivity import (
    ParameterDim,
    ParameterSpace,
    SaltelliDesign,
    SobolIndices,
    default_parameter_space,
    map_sample_to_config,
    round_half_up,
    saltelli_sample,
    sobol_indices,
)

__version__ = "0.1.0"

__all__ = [
    "add_teleconnections",
    "AgentFunctionalType",
    "apply_attitude_schedule",
    "apply_values",
    "attitude_effect",
    "AttitudeSchedule",
    "BehaviouralProfile",
    "BehaviourGlobals",
    "build_grid",
    "build_lattice",
    "build_network",
    "build_state",
    "Cell",
    "clip_social",
    "ConfigurationError",
    "CONSERVATION",
    "DEFAULT_AFTS",
    "default_parameter_space",
    "default_peaks",
    "DegenerateVarianceError",
    "DemandState",
    "evaluate_design",
    "evaluate_transition",
    "ExperimentConfig",
    "fmt",
    "generate_capitals",
    "giving_in_threshold",
    "HIGH_INTENSITY",
    "influence_score",
    "init_land_use",
    "intensity_shares",
    "InvalidTransitionError",
    "LandscapeGrid",
    "load_config",
    "loads_config",
    "map_sample_to_config",
    "MEDIUM_INTENSITY",
    "mesh_connectivity",
    "METRICS_HEADER",
    "metrics_line",
    "neighbour_intensity_fraction",
    "NetworkConfig",
    "OUTPUT_METRICS",
    "ParameterDim",
    "ParameterSpace",
    "patch_decomposition",
    "PatchDecomposition",
    "production",
    "read_map_csv",
    "recompute_metrics",
    "round_half_up",
    "run_hysteresis",
    "run_replicates",
    "run_schedule",
    "run_single",
    "run_sobol",
    "run_sweep",
    "run_until_stable",
    "RunResult",
    "RunSummary",
    "saltelli_sample",
    "SaltelliDesign",
    "save_config",
    "selection_count",
    "serialize_config",
    "share_trajectory_summary",
    "SimulationState",
    "sobol_indices",
    "SobolIndices",
    "SobolSettings",
    "social_influence",
    "SocialNetwork",
    "sweep_points",
    "SweepParam",
    "SweepSpec",
    "tick",
    "TickReport",
    "total_supply",
    "Trajectory",
    "trajectory_lines",
    "UndefinedFractionError",
    "unit_benefit",
    "utility",
    "write_capitals_csv",
    "write_design_csv",
    "write_edges_csv",
    "write_indices_json",
    "write_map_csv",
    "write_metrics_csv",
    "write_sweep_csv",
    "write_trajectory_csv",
]

"""Run harness: build simulations from configs and execute experiment plans.

Seeds are derived from the config seed with numpy's splittable SeedSequence,
keyed by (seed, point/row, replicate), so every run is reproducible on its
own and adding replicates or reordering work never changes earlier results.
Sensitivity rows share the seed of their base sample across Saltelli blocks
(common random numbers), which keeps inert parameters' indices near zero.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .behaviour import BehaviourGlobals, BehaviouralProfile
from .config import CM_ALIAS, ExperimentConfig, SweepSpec, apply_values
from .dynamics import (
    AttitudeSchedule,
    DemandState,
    SimulationState,
    run_schedule,
    run_until_stable,
)
from .errors import ConfigurationError
from .landscape import DEFAULT_AFTS, LandscapeGrid, generate_capitals, init_land_use
from .metrics import (
    RunSummary,
    Trajectory,
    intensity_shares,
    mesh_connectivity,
    share_trajectory_summary,
    total_supply,
)
from .network import add_teleconnections, build_lattice
from .sensitivity import (
    ParameterSpace,
    SaltelliDesign,
    SobolIndices,
    default_parameter_space,
    map_sample_to_config,
    saltelli_sample,
    sobol_indices,
)

OUTPUT_METRICS = ("share_c", "share_mi", "share_hi", "s_mat", "s_nm")


def _build_profiles(config: ExperimentConfig, n: int, seed_seq) -> tuple[BehaviouralProfile, np.ndarray]:
    """Draw per-cell behavioural parameters around the configured means.

    Every field consumes the stream even at sigma 0, so turning heterogeneity
    on or off for one parameter never shifts another parameter's draws.
    """
    rng = np.random.default_rng(seed_seq)

    def draws():
        return rng.standard_normal(n)

    z_att = draws()
    attitude_offsets = config.attitude_sigma * z_att
    attitude = np.clip(config.attitude_mean + attitude_offsets, -1.0, 1.0)

    def spread(mean, sigma, z, lo, hi):
        if sigma == 0.0:
            return float(mean)
        return np.clip(mean + sigma * z, lo, hi)

    profile = BehaviouralProfile(
        attitude=attitude,
        inertia_coeff=spread(config.inertia_lambda, config.inertia_sigma, draws(), 0.0, 1.0),
        norm_weight=spread(config.norm_weight_w, config.norm_weight_sigma, draws(), 0.0, 1.0),
        cm_int=spread(config.cm_int, config.cm_int_sigma, draws(), 0.0, 1.0),
        cm_ext=spread(config.cm_ext, config.cm_ext_sigma, draws(), 0.0, 1.0),
        git_upper=spread(config.git_upper_L, config.git_upper_sigma, draws(), 0.0, 1.0),
    )
    return profile, attitude_offsets


def build_state(config: ExperimentConfig, master: np.random.SeedSequence | None = None) -> SimulationState:
    """Assemble a ready-to-run simulation; the master seed splits into
    independent streams for capitals, initial land use, network, profiles,
    and the per-tick cell selection."""
    if master is None:
        master = np.random.SeedSequence((config.seed, 0))
    s_capital, s_init, s_net, s_profiles, s_sim = master.spawn(5)

    c_prod, c_nat = generate_capitals(
        config.grid_width, config.grid_height, config.peaks, config.noise_amp, s_capital
    )
    n = config.grid_width * config.grid_height
    aft_id = init_land_use(n, config.shares, s_init)
    profiles, attitude_offsets = _build_profiles(config, n, s_profiles)
    grid = LandscapeGrid(
        config.grid_width, config.grid_height, c_prod, c_nat, aft_id, profiles=profiles
    )
    net = build_lattice(config.grid_width, config.grid_height, config.moore_radius)
    net = add_teleconnections(net, config.n_tele, s_net)
    return SimulationState(
        grid=grid,
        network=net,
        behaviour_globals=BehaviourGlobals(config.logistic_k),
        demand=DemandState(config.demand_mat, config.demand_nm),
        rng=np.random.default_rng(s_sim),
        afts=DEFAULT_AFTS,
        economic_baseline=config.economic_baseline,
        attitude_offsets=attitude_offsets,
    )


@dataclass
class RunResult:
    config: ExperimentConfig
    seed: int
    rep: int
    state: SimulationState
    trajectory: Trajectory
    summary: RunSummary
    mesh: float

    @property
    def run_id(self) -> str:
        return f"run_s{self.seed}_r{self.rep}"


def _run_with_master(config: ExperimentConfig, master: np.random.SeedSequence) -> tuple[SimulationState, Trajectory]:
    state = build_state(config, master)
    if config.schedule is not None:
        return run_schedule(state, AttitudeSchedule(config.schedule))
    return run_until_stable(state, config.max_ticks, config.window, config.epsilon)


def run_single(config: ExperimentConfig, rep: int = 0) -> RunResult:
    """One full run; scheduled configs follow their schedule, others run to
    stability.

    Seeded as point 0 of a sweep, so a one-point sweep reproduces it exactly.
    """
    master = np.random.SeedSequence((config.seed, 0, rep))
    state, trajectory = _run_with_master(config, master)
    return RunResult(
        config=config,
        seed=config.seed,
        rep=rep,
        state=state,
        trajectory=trajectory,
        summary=share_trajectory_summary(trajectory),
        mesh=mesh_connectivity(state.grid),
    )


def run_replicates(config: ExperimentConfig, threads: int = 1) -> list[RunResult]:
    jobs = [(config, rep) for rep in range(config.replications)]
    return _parallel_map(_replicate_job, jobs, threads)


def _replicate_job(args) -> RunResult:
    config, rep = args
    return run_single(config, rep)


def run_hysteresis(config: ExperimentConfig, rep: int = 0) -> RunResult:
    if config.schedule is None:
        raise ConfigurationError("hysteresis runs need a [schedule] section")
    return run_single(config, rep)


def sweep_points(sweep: SweepSpec) -> list[dict[str, float]]:
    """Grid points in row-major order: first parameter outermost."""
    grids = [param.values() for param in sweep.params]
    if len(grids) == 1:
        return [{sweep.params[0].name: float(v)} for v in grids[0]]
    return [
        {sweep.params[0].name: float(v0), sweep.params[1].name: float(v1)}
        for v0 in grids[0]
        for v1 in grids[1]
    ]


def _sweep_job(args) -> dict:
    config, point, point_idx, rep = args
    cfg = apply_values(config, point)
    master = np.random.SeedSequence((config.seed, point_idx, rep))
    state, trajectory = _run_with_master(cfg, master)
    summary = share_trajectory_summary(trajectory)
    row = {}
    for name in point:
        row[name] = cfg.cm_int if name == CM_ALIAS else getattr(cfg, name)
    row.update(
        rep=rep,
        seed=config.seed,
        final_share_c=summary.final_share_c,
        final_share_mi=summary.final_share_mi,
        final_share_hi=summary.final_share_hi,
        s_mat=summary.final_s_mat,
        s_nm=summary.final_s_nm,
        mesh=mesh_connectivity(state.grid),
        stabilised_at=summary.stabilised_at,
    )
    return row


def run_sweep(
    config: ExperimentConfig, sweep: SweepSpec | None = None, threads: int = 1
) -> tuple[list[str], list[dict]]:
    """Run the full parameter grid; returns (swept names, long-format rows)."""
    sweep = sweep if sweep is not None else config.sweep
    if sweep is None:
        raise ConfigurationError("no sweep specified: add a [sweep] section")
    points = sweep_points(sweep)
    jobs = [
        (config, point, point_idx, rep)
        for point_idx, point in enumerate(points)
        for rep in range(sweep.replications)
    ]
    rows = _parallel_map(_sweep_job, jobs, threads)
    return [p.name for p in sweep.params], rows


def _design_job(args) -> list[float]:
    base_config, space, row_values, base_index, replicates = args
    cfg = map_sample_to_config(row_values, space, base_config)
    acc = np.zeros(len(OUTPUT_METRICS))
    for rep in range(replicates):
        master = np.random.SeedSequence((base_config.seed, base_index, rep))
        state, trajectory = _run_with_master(cfg, master)
        summary = share_trajectory_summary(trajectory)
        acc += np.array(
            [
                summary.final_share_c,
                summary.final_share_mi,
                summary.final_share_hi,
                summary.final_s_mat,
                summary.final_s_nm,
            ]
        )
    return list(acc / replicates)


def evaluate_design(
    design: SaltelliDesign,
    base_config: ExperimentConfig,
    replicates: int = 1,
    threads: int = 1,
) -> np.ndarray:
    """Model outputs for every design row, averaged over replicate seeds.

    Returns an (n_rows, 5) array with columns OUTPUT_METRICS. Rows derived
    from the same base sample share their replicate seeds.
    """
    jobs = [
        (base_config, design.space, list(design.matrix[r]), design.base_index(r), replicates)
        for r in range(design.n_rows)
    ]
    rows = _parallel_map(_design_job, jobs, threads)
    return np.asarray(rows)


def run_sobol(
    config: ExperimentConfig,
    n_base: int,
    second_order: bool = False,
    replicates: int = 1,
    space: ParameterSpace | None = None,
    threads: int = 1,
) -> tuple[SaltelliDesign, np.ndarray, dict[str, SobolIndices]]:
    """Full campaign: design, model evaluations, and per-metric indices."""
    space = space if space is not None else default_parameter_space()
    design = saltelli_sample(space, n_base, seed=config.seed, second_order=second_order)
    outputs = evaluate_design(design, config, replicates=replicates, threads=threads)
    indices = {
        metric: sobol_indices(design, outputs[:, m], seed=config.seed)
        for m, metric in enumerate(OUTPUT_METRICS)
    }
    return design, outputs, indices


def _parallel_map(fn, jobs, threads):
    if threads <= 1:
        return [fn(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, jobs))


def recompute_metrics(
    config: ExperimentConfig,
    width: int,
    height: int,
    aft_id: np.ndarray,
    connectivity: int = 4,
    rep: int = 0,
) -> tuple[dict[int, float], tuple[float, float], float]:
    """Shares, supplies, and mesh for a stored land-use map.

    Capitals are regenerated from the config (same stream as the run that
    wrote the map) so supplies are well-defined.
    """
    if (width, height) != (config.grid_width, config.grid_height):
        raise ConfigurationError(
            f"map is {width}x{height} but config grid is "
            f"{config.grid_width}x{config.grid_height}"
        )
    master = np.random.SeedSequence((config.seed, 0, rep))
    s_capital = master.spawn(1)[0]
    c_prod, c_nat = generate_capitals(width, height, config.peaks, config.noise_amp, s_capital)
    grid = LandscapeGrid(width, height, c_prod, c_nat, aft_id)
    return (
        intensity_shares(grid),
        total_supply(grid),
        mesh_connectivity(grid, connectivity),
    )

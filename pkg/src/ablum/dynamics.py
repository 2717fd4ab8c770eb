"""Simulation engine: demand-driven competition gated by giving-in thresholds.

Each tick recomputes landscape supply, draws a random subset of cells, and
lets the non-incumbent management types compete for each drawn cell against a
start-of-tick snapshot. A competitor wins only if its utility surplus over
the incumbent strictly exceeds the manager's giving-in threshold; among
admissible competitors the largest surplus-over-threshold wins, with ties
broken towards the smaller intensity jump, then the lower type id.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .behaviour import BehaviourGlobals, _giving_in, _influence_score, clip_social
from .errors import ConfigurationError
from .landscape import DEFAULT_AFTS, AgentFunctionalType, Cell, LandscapeGrid
from .metrics import Trajectory
from .network import SocialNetwork

# Fraction of cells reconsidering their management each tick.
UPDATE_FRACTION = 0.05


@dataclass
class DemandState:
    """Exogenous demands and the most recent supply totals."""

    d_mat: float
    d_nm: float
    s_mat: float = 0.0
    s_nm: float = 0.0

    def __post_init__(self):
        if self.d_mat <= 0 or self.d_nm <= 0:
            raise ConfigurationError("demands must be positive")


def unit_benefit(demand: float, supply: float) -> float:
    """Marginal value of one supply unit: relative shortfall, floored at 0."""
    if demand <= 0:
        raise ConfigurationError("demand must be positive")
    return max(0.0, (demand - supply) / demand)


def utility(aft: AgentFunctionalType, cell: Cell, demand: DemandState) -> float:
    """Benefit-weighted production of a cell under a given management type."""
    b_mat = unit_benefit(demand.d_mat, demand.s_mat)
    b_nm = unit_benefit(demand.d_nm, demand.s_nm)
    return b_mat * aft.s_prod * cell.c_prod + b_nm * aft.s_nat * cell.c_nat


@dataclass
class AttitudeSchedule:
    """Piecewise-linear mean attitude over ticks; ends held constant."""

    breakpoints: tuple[tuple[int, float], ...]

    def __post_init__(self):
        if not self.breakpoints:
            raise ConfigurationError("schedule needs at least one breakpoint")
        ticks = [t for t, _ in self.breakpoints]
        if any(b <= a for a, b in zip(ticks, ticks[1:])):
            raise ConfigurationError("schedule ticks must be strictly increasing")
        if ticks[0] < 0:
            raise ConfigurationError("schedule ticks must be non-negative")
        for _, mean in self.breakpoints:
            if not -1.0 <= mean <= 1.0:
                raise ConfigurationError("schedule means must lie in [-1, 1]")

    @property
    def last_tick(self) -> int:
        return int(self.breakpoints[-1][0])

    def mean_at(self, tick: int) -> float:
        ticks = [t for t, _ in self.breakpoints]
        means = [m for _, m in self.breakpoints]
        return float(np.interp(tick, ticks, means))


@dataclass
class SimulationState:
    """Everything a run needs: landscape, network, behaviour, demand, RNG."""

    grid: LandscapeGrid
    network: SocialNetwork
    behaviour_globals: BehaviourGlobals
    demand: DemandState
    rng: np.random.Generator
    afts: tuple[AgentFunctionalType, ...] = DEFAULT_AFTS
    tick: int = 0
    economic_baseline: bool = False
    attitude_offsets: np.ndarray | None = None
    intensity_table: np.ndarray = field(init=False, repr=False)
    s_prod_table: np.ndarray = field(init=False, repr=False)
    s_nat_table: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.grid.profiles is None:
            raise ConfigurationError("grid needs behavioural profiles attached")
        if self.network.n_cells != self.grid.n_cells:
            raise ConfigurationError("network size does not match the grid")
        self.intensity_table = np.array([a.intensity for a in self.afts])
        self.s_prod_table = np.array([a.s_prod for a in self.afts])
        self.s_nat_table = np.array([a.s_nat for a in self.afts])


@dataclass(frozen=True)
class TickReport:
    """Cells drawn this tick and the transitions that were committed."""

    selected: np.ndarray
    cells: np.ndarray
    old_aft: np.ndarray
    new_aft: np.ndarray


def selection_count(n_cells: int) -> int:
    """Number of cells reconsidered per tick, rounded to the nearest integer."""
    return int(math.floor(UPDATE_FRACTION * n_cells + 0.5))


def _profile_at(value, sel):
    return value[sel] if isinstance(value, np.ndarray) else value


def _neighbour_class_counts(net: SocialNetwork, aft_id: np.ndarray, sel: np.ndarray, n_types: int):
    """Counts of each class among the network neighbours of selected cells."""
    starts = net.indptr[sel]
    lens = (net.indptr[sel + 1] - starts).astype(np.int64)
    total = int(lens.sum())
    if total == 0:
        return np.zeros((sel.size, n_types), dtype=np.int64), lens
    seg = np.repeat(np.arange(sel.size), lens)
    first = np.cumsum(lens) - lens
    pos = np.arange(total) - np.repeat(first, lens)
    flat = net.indices[np.repeat(starts, lens) + pos]
    counts = np.bincount(seg * n_types + aft_id[flat], minlength=sel.size * n_types)
    return counts.reshape(sel.size, n_types), lens


def _refresh_supply(state: SimulationState) -> tuple[float, float]:
    grid = state.grid
    s_mat = float(state.s_prod_table[grid.aft_id] @ grid.c_prod)
    s_nm = float(state.s_nat_table[grid.aft_id] @ grid.c_nat)
    state.demand.s_mat = s_mat
    state.demand.s_nm = s_nm
    return s_mat, s_nm


def tick(state: SimulationState) -> TickReport:
    """Advance the state by one tick (in place); returns what changed.

    All evaluations read the start-of-tick snapshot; winning transitions are
    committed together at the end, so outcomes do not depend on the order in
    which drawn cells are processed.
    """
    grid = state.grid
    n = grid.n_cells
    n_types = len(state.afts)
    s_mat, s_nm = _refresh_supply(state)
    b_mat = unit_benefit(state.demand.d_mat, s_mat)
    b_nm = unit_benefit(state.demand.d_nm, s_nm)

    k = selection_count(n)
    sel = np.sort(state.rng.choice(n, size=k, replace=False)) if k > 0 else np.empty(0, np.int64)
    if sel.size == 0:
        state.tick += 1
        empty = np.empty(0, dtype=np.int64)
        return TickReport(sel, empty, empty, empty)

    inc = grid.aft_id[sel]
    utilities = (
        b_mat * state.s_prod_table[:, None] * grid.c_prod[sel][None, :]
        + b_nm * state.s_nat_table[:, None] * grid.c_nat[sel][None, :]
    )
    u_inc = utilities[inc, np.arange(sel.size)]

    counts, deg = _neighbour_class_counts(state.network, grid.aft_id, sel, n_types)
    at_or_above = state.intensity_table[None, :] >= state.intensity_table[:, None]
    at_or_below = state.intensity_table[None, :] <= state.intensity_table[:, None]
    with np.errstate(invalid="ignore"):
        p_ge = (counts @ at_or_above.T) / deg[:, None]
        p_le = (counts @ at_or_below.T) / deg[:, None]

    profiles = grid.profiles
    att = _profile_at(profiles.attitude, sel)
    lam = _profile_at(profiles.inertia_coeff, sel)
    w = _profile_at(profiles.norm_weight, sel)
    cm_int = _profile_at(profiles.cm_int, sel)
    cm_ext = _profile_at(profiles.cm_ext, sel)
    upper = _profile_at(profiles.git_upper, sel)
    logistic_k = state.behaviour_globals.logistic_k

    best_score = np.full(sel.size, -np.inf)
    best_jump = np.full(sel.size, np.inf)
    best_id = np.full(sel.size, -1, dtype=np.int64)
    inc_intensity = state.intensity_table[inc]
    for c in range(n_types):
        delta = state.intensity_table[c] - inc_intensity
        intensifying = delta > 0
        p = np.where(intensifying, p_ge[:, c], p_le[:, c])
        cm = np.where(intensifying, cm_int, cm_ext)
        a_eff = -np.sign(delta) * att
        jump = np.abs(delta)
        x = _influence_score(w, lam, clip_social(p - cm), a_eff, jump)
        git = 0.0 if state.economic_baseline else _giving_in(upper, logistic_k, x)
        surplus = utilities[c] - u_inc
        admissible = (inc != c) & (surplus > git)
        score = surplus - git
        better = admissible & (
            (score > best_score) | ((score == best_score) & (jump < best_jump))
        )
        best_score = np.where(better, score, best_score)
        best_jump = np.where(better, jump, best_jump)
        best_id = np.where(better, c, best_id)

    changed = best_id >= 0
    cells = sel[changed]
    old = inc[changed].copy()
    new = best_id[changed]
    grid.aft_id[cells] = new  # synchronous commit
    state.tick += 1
    return TickReport(selected=sel, cells=cells, old_aft=old, new_aft=new)


def apply_attitude_schedule(
    state: SimulationState,
    schedule: AttitudeSchedule,
    per_cell_offsets: np.ndarray | None = None,
) -> SimulationState:
    """Set attitudes to the scheduled mean at the current tick plus offsets.

    The sum is clamped to [-1, 1] cell by cell.
    """
    offsets = per_cell_offsets if per_cell_offsets is not None else state.attitude_offsets
    if offsets is None:
        offsets = 0.0
    mean = schedule.mean_at(state.tick)
    state.grid.profiles.attitude = np.clip(mean + offsets, -1.0, 1.0)
    return state


def _record_row(state: SimulationState) -> tuple:
    counts = np.bincount(state.grid.aft_id, minlength=len(state.afts))
    shares = counts / state.grid.n_cells
    s_mat, s_nm = _refresh_supply(state)
    return (
        state.tick,
        float(shares[0]),
        float(shares[1]),
        float(shares[2]),
        s_mat,
        s_nm,
        float(np.mean(state.grid.profiles.attitude)),
    )


def _window_settled(values: list[float], window: int, epsilon: float) -> bool:
    tail = values[-(window + 1) :]
    return max(tail) - min(tail) < epsilon


def run_until_stable(
    state: SimulationState,
    max_ticks: int = 2000,
    window: int = 50,
    epsilon: float = 0.002,
) -> tuple[SimulationState, Trajectory]:
    """Tick until every share moved less than epsilon across a trailing window.

    The check spans the window+1 most recent rows, so a run that never moves
    stops exactly at tick == window. Stops at max_ticks regardless.
    """
    if window < 1 or max_ticks < window:
        raise ConfigurationError("need max_ticks >= window >= 1")
    if epsilon <= 0:
        raise ConfigurationError("epsilon must be positive")
    rows = [_record_row(state)]
    shares = {1: [rows[0][1]], 2: [rows[0][2]], 3: [rows[0][3]]}
    while state.tick < max_ticks:
        tick(state)
        row = _record_row(state)
        rows.append(row)
        for col in (1, 2, 3):
            shares[col].append(row[col])
        if state.tick >= window and all(
            _window_settled(shares[col], window, epsilon) for col in (1, 2, 3)
        ):
            break
    return state, Trajectory.from_rows(rows)


def run_schedule(
    state: SimulationState,
    schedule: AttitudeSchedule,
) -> tuple[SimulationState, Trajectory]:
    """Run for the schedule's full span, re-applying attitudes every tick."""
    apply_attitude_schedule(state, schedule)
    rows = [_record_row(state)]
    scheduled = [schedule.mean_at(state.tick)]
    while state.tick < schedule.last_tick:
        tick(state)
        apply_attitude_schedule(state, schedule)
        rows.append(_record_row(state))
        scheduled.append(schedule.mean_at(state.tick))
    return state, Trajectory.from_rows(rows, scheduled=scheduled)

"""Output metrics: intensity shares, service supply, and patch connectivity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import ndimage

from .errors import ConfigurationError
from .landscape import DEFAULT_AFTS, AgentFunctionalType, LandscapeGrid

_STRUCTURE_4 = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
_STRUCTURE_8 = np.ones((3, 3), dtype=bool)


@dataclass
class Trajectory:
    """Per-tick record of shares, supplies, and the mean attitude."""

    tick: np.ndarray
    share_c: np.ndarray
    share_mi: np.ndarray
    share_hi: np.ndarray
    s_mat: np.ndarray
    s_nm: np.ndarray
    mean_attitude: np.ndarray
    scheduled_attitude: np.ndarray | None = None

    @property
    def n_rows(self) -> int:
        return int(self.tick.size)

    @classmethod
    def from_rows(cls, rows: Sequence[tuple], scheduled: Sequence[float] | None = None):
        if not rows:
            return cls(*(np.empty(0) for _ in range(7)))
        cols = list(zip(*rows))
        return cls(
            tick=np.asarray(cols[0], dtype=np.int64),
            share_c=np.asarray(cols[1]),
            share_mi=np.asarray(cols[2]),
            share_hi=np.asarray(cols[3]),
            s_mat=np.asarray(cols[4]),
            s_nm=np.asarray(cols[5]),
            mean_attitude=np.asarray(cols[6]),
            scheduled_attitude=None if scheduled is None else np.asarray(scheduled),
        )


@dataclass(frozen=True)
class RunSummary:
    final_share_c: float
    final_share_mi: float
    final_share_hi: float
    final_s_mat: float
    final_s_nm: float
    stabilised_at: int


@dataclass(frozen=True)
class PatchDecomposition:
    """Connected-component cell counts per intensity class."""

    areas_by_class: dict[int, tuple[int, ...]]

    def all_areas(self) -> tuple[int, ...]:
        return tuple(a for areas in self.areas_by_class.values() for a in areas)


def intensity_shares(grid: LandscapeGrid, n_types: int = 3) -> dict[int, float]:
    """Share of cells per intensity class; shares sum to 1."""
    counts = np.bincount(grid.aft_id, minlength=n_types)
    return {c: float(counts[c]) / grid.n_cells for c in range(n_types)}


def total_supply(
    grid: LandscapeGrid, afts: Sequence[AgentFunctionalType] = DEFAULT_AFTS
) -> tuple[float, float]:
    """Landscape totals of material and non-material production."""
    s_prod = np.array([a.s_prod for a in afts])[grid.aft_id]
    s_nat = np.array([a.s_nat for a in afts])[grid.aft_id]
    return float(s_prod @ grid.c_prod), float(s_nat @ grid.c_nat)


def patch_decomposition(
    grid: LandscapeGrid, connectivity: int = 4, n_types: int = 3
) -> PatchDecomposition:
    """Decompose each intensity class into connected patches of cells."""
    if connectivity not in (4, 8):
        raise ConfigurationError("connectivity must be 4 or 8")
    structure = _STRUCTURE_4 if connectivity == 4 else _STRUCTURE_8
    field = grid.aft_id.reshape(grid.height, grid.width)
    areas: dict[int, tuple[int, ...]] = {}
    for c in range(n_types):
        labels, n_patches = ndimage.label(field == c, structure=structure)
        if n_patches == 0:
            areas[c] = ()
            continue
        sizes = np.bincount(labels.ravel())[1:]  # label 0 is background
        areas[c] = tuple(int(s) for s in sizes)
    return PatchDecomposition(areas)


def mesh_connectivity(grid: LandscapeGrid, connectivity: int = 4) -> float:
    """Effective mesh size: sum of squared patch areas over total area.

    Ranges from 1 (fully fragmented) to n_cells (one uniform patch).
    """
    decomposition = patch_decomposition(grid, connectivity)
    total = sum(a * a for a in decomposition.all_areas())
    return float(total) / grid.n_cells


def share_trajectory_summary(trajectory: Trajectory) -> RunSummary:
    """Final shares and supplies plus the tick the run settled on."""
    if trajectory.n_rows == 0:
        raise ValueError("trajectory is empty")
    last = trajectory.n_rows - 1
    return RunSummary(
        final_share_c=float(trajectory.share_c[last]),
        final_share_mi=float(trajectory.share_mi[last]),
        final_share_hi=float(trajectory.share_hi[last]),
        final_s_mat=float(trajectory.s_mat[last]),
        final_s_nm=float(trajectory.s_nm[last]),
        stabilised_at=int(trajectory.tick[last]),
    )

"""Discrete energy evaluation on label grids.

The discrete energy mirrors the continuum one term for term:

* surface:  sum over fluid pairs of sigma_ij times the Crofton perimeter
  estimate of the (i, j) interface;
* wetting:  sum over in-domain cells of beta_{label} times the length of the
  cell's edges on the domain boundary (4-neighborhood, edge length h);
* gravity:  sum over in-domain cells of rho_{label} * g * h^2 * y_center;
* volume penalty (V/DV modes only): C * h^2 * sum_j |count_j - target_j|
  where counts and integer targets range over unfrozen in-domain cells.

Targets are resolved once from the requested areas by largest-remainder
rounding so they sum exactly to the number of unfrozen cells; the penalty
therefore vanishes exactly when every fluid volume matches its target to
within half a cell (the closest the grid can represent it).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..tensions import EnergyParams
from .crofton import perimeter_by_pair
from .grid import NUM_FLUIDS, LabelGrid
from .options import InfeasibleVolumes, MinimizeOptions


@dataclass(frozen=True)
class EnergyBreakdown:
    """The discrete energy split into its constituent terms."""

    surface: float
    wetting: float
    gravity: float
    volume_penalty: float
    total: float


def boundary_edge_lengths(grid: LabelGrid) -> np.ndarray:
    """Per-cell length of domain-boundary edges (4-neighborhood).

    A cell edge lies on the domain boundary when the 4-neighbor across it is
    out of the domain or out of the grid.  Out-of-domain cells get 0.
    """
    dom = grid.domain_mask
    height, width = dom.shape
    padded = np.pad(dom, 1, constant_values=False)
    count = np.zeros((height, width), dtype=np.int64)
    for dy, dx in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        count += ~padded[1 + dy : 1 + dy + height, 1 + dx : 1 + dx + width]
    count[~dom] = 0
    return count.astype(np.float64) * grid.h


def default_penalty_coefficient(p: EnergyParams, h: float) -> float:
    """Default C: a one-cell violation outweighs any single flip's gain."""
    return 4.0 * p.sigmas.max_sigma / h


def resolve_volume_targets(grid: LabelGrid, volumes) -> np.ndarray:
    """Integer per-fluid cell targets for the unfrozen part of the domain.

    Validates that the requested areas sum to the unfrozen area within one
    cell, then rounds by largest remainder so the integer targets sum exactly
    to the unfrozen cell count.
    """
    v = np.asarray(volumes, dtype=np.float64)
    if v.shape != (NUM_FLUIDS,):
        raise InfeasibleVolumes(f"expected {NUM_FLUIDS} volumes, got shape {v.shape}")
    if not np.all(np.isfinite(v)) or np.any(v < 0):
        raise InfeasibleVolumes(f"volumes must be finite and >= 0, got {v.tolist()}")
    cell_area = grid.h * grid.h
    free_cells = int(grid.unfrozen_mask.sum())
    if abs(float(v.sum()) - free_cells * cell_area) > cell_area:
        raise InfeasibleVolumes(
            f"target volumes sum to {float(v.sum()):.6g} but the unfrozen domain "
            f"area is {free_cells * cell_area:.6g} (tolerance: one cell area "
            f"{cell_area:.3g})"
        )
    raw = v / cell_area
    base = np.floor(raw).astype(np.int64)
    short = free_cells - int(base.sum())
    if short < 0:
        # Rounding pathologies cannot produce this after the sum check, but
        # guard against it rather than return negative leftovers.
        raise InfeasibleVolumes("volume targets exceed the unfrozen cell count")
    order = np.argsort(-(raw - base))
    for i in range(short):
        base[order[i % NUM_FLUIDS]] += 1
    return base


def grid_energy(
    grid: LabelGrid, p: EnergyParams, opts: MinimizeOptions | None = None
) -> EnergyBreakdown:
    """Evaluate the full discrete energy of a grid configuration.

    ``opts`` supplies the direction family and, in V/DV modes, the volume
    penalty; ``None`` means plain 8-direction evaluation with no penalty.
    """
    directions = opts.crofton_directions if opts is not None else 8
    per = perimeter_by_pair(grid, directions)
    surface = sum(p.sigmas.pair(*pair) * length for pair, length in per.items())

    labels = grid.labels
    dom = grid.domain_mask
    wetting = 0.0
    if any(b != 0.0 for b in p.betas):
        bedge = boundary_edge_lengths(grid)
        for j in range(NUM_FLUIDS):
            wetting += p.betas[j] * float(bedge[dom & (labels == j)].sum())

    gravity = 0.0
    if p.g != 0.0 and any(r != 0.0 for r in p.rhos):
        cell_area = grid.h * grid.h
        ys = grid.ys
        for j in range(NUM_FLUIDS):
            mask = dom & (labels == j)
            rows = mask.sum(axis=1).astype(np.float64)
            gravity += p.rhos[j] * p.g * cell_area * float(rows @ ys)

    penalty = 0.0
    if opts is not None and opts.uses_volume_penalty:
        targets = resolve_volume_targets(grid, opts.target_volumes)
        counts = grid.fluid_counts(unfrozen_only=True)
        c = opts.volume_penalty_C
        if c is None:
            c = default_penalty_coefficient(p, grid.h)
        penalty = c * grid.h * grid.h * float(np.abs(counts - targets).sum())

    total = surface + wetting + gravity + penalty
    return EnergyBreakdown(surface, wetting, gravity, penalty, total)

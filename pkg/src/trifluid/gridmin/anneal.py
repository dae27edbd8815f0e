"""Simulated annealing over single-cell relabels.

:func:`minimize` runs geometric-cooling Metropolis sweeps followed by a
zero-temperature greedy phase that stops once several consecutive sweeps
accept nothing.  All randomness flows from one PCG64 generator seeded by the
options, pre-drawn per sweep in numpy, so a (grid, params, options) triple
determines the trajectory exactly — on either kernel backend.

The energy reported in the trace is recomputed from scratch after every
sweep by the same code paths used for standalone evaluation
(:mod:`trifluid.gridmin.energy`); it is never accumulated from kernel
deltas, so the trace doubles as a continuous consistency check between the
kernel's local energy model and the global one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..tensions import EnergyParams
from .backend import get_sweep
from .crofton import direction_family, max_offset_reach
from .energy import (
    boundary_edge_lengths,
    default_penalty_coefficient,
    grid_energy,
    resolve_volume_targets,
)
from .grid import NUM_FLUIDS, LabelGrid
from .options import FrozenRingTooThin, MinimizeOptions


@dataclass(frozen=True)
class TraceRow:
    """One energy-trace entry; row 0 is the initial state, then one per sweep."""

    sweep: int
    temperature: float
    energy: float
    accepted: int


def check_frozen_ring(grid: LabelGrid, directions: int = 8) -> None:
    """Validate Dirichlet boundary data thickness.

    Every unfrozen in-domain cell must sit farther from the domain boundary
    (Chebyshev distance in cells) than the longest offset the perimeter
    estimate uses, so rim cells always see a full neighborhood of fixed data.
    """
    reach = max_offset_reach(directions)
    size = 2 * reach + 1
    structure = np.ones((size, size), dtype=bool)
    deep = ndimage.binary_erosion(grid.domain_mask, structure, border_value=0)
    rim_unfrozen = grid.unfrozen_mask & ~deep
    if rim_unfrozen.any():
        raise FrozenRingTooThin(
            f"{int(rim_unfrozen.sum())} unfrozen cells lie within {reach} cells "
            "of the domain boundary; freeze a thicker ring of boundary data"
        )


def minimize(
    grid: LabelGrid,
    p: EnergyParams,
    opts: MinimizeOptions | None = None,
    move_log: list | None = None,
) -> tuple[LabelGrid, list[TraceRow]]:
    """Anneal a copy of ``grid`` toward lower energy; returns (grid, trace).

    The input grid is never mutated.  Frozen cells are bit-identical in the
    result.  If ``move_log`` is a list, one entry
    ``(sweep, temperature, deltas, accepts, log_unifs)`` is appended per
    sweep with per-visit proposal deltas and acceptance flags — a testing
    aid for auditing the Metropolis rule; it costs memory, not determinism.
    """
    if opts is None:
        opts = MinimizeOptions()
    out = grid.copy()

    if opts.uses_dirichlet:
        check_frozen_ring(out, opts.crofton_directions)
    use_volume = opts.uses_volume_penalty
    if use_volume:
        targets = resolve_volume_targets(out, opts.target_volumes)
        penalty_c = opts.volume_penalty_C
        if penalty_c is None:
            penalty_c = default_penalty_coefficient(p, out.h)
    else:
        targets = np.zeros(NUM_FLUIDS, dtype=np.int64)
        penalty_c = 0.0

    labels_flat = out.labels.ravel()
    domain_flat = out.domain_mask.ravel()
    unfrozen_idx = np.flatnonzero(out.unfrozen_mask.ravel()).astype(np.int64)
    counts = np.bincount(
        labels_flat[unfrozen_idx], minlength=NUM_FLUIDS
    ).astype(np.int64)

    offsets, weights = direction_family(opts.crofton_directions)
    wts = np.ascontiguousarray(weights * out.h)
    offs = np.ascontiguousarray(offsets)
    sig = p.sigmas.as_matrix()
    betas = np.asarray(p.betas, dtype=np.float64)
    rhos = np.asarray(p.rhos, dtype=np.float64)
    bedge_flat = boundary_edge_lengths(out).ravel()
    ycells = out.ys
    cell_area = out.h * out.h

    schedule = opts.schedule
    t0 = schedule.t0 if schedule.t0 is not None else p.sigmas.max_sigma * out.h

    rng = np.random.Generator(np.random.PCG64(opts.seed))
    sweep_fn = get_sweep()
    n = unfrozen_idx.size
    log_moves = move_log is not None
    log_delta = np.zeros(n if log_moves else 1, dtype=np.float64)
    log_accept = np.zeros(n if log_moves else 1, dtype=np.uint8)

    def run_sweep(sweep_no: int, temperature: float) -> int:
        order = rng.permutation(unfrozen_idx)
        props = rng.integers(0, 2, size=n, dtype=np.int64)
        log_unifs = np.log(rng.random(size=n))
        accepted, _ = sweep_fn(
            labels_flat,
            domain_flat,
            out.width,
            out.height,
            order,
            props,
            log_unifs,
            temperature,
            sig,
            betas,
            rhos,
            p.g,
            bedge_flat,
            ycells,
            cell_area,
            penalty_c,
            counts,
            targets,
            use_volume,
            offs,
            wts,
            log_delta,
            log_accept,
            log_moves,
        )
        if log_moves:
            move_log.append(
                (sweep_no, temperature, log_delta.copy(), log_accept.copy(), log_unifs)
            )
        return int(accepted)

    def current_energy() -> float:
        return grid_energy(out, p, opts).total

    energy = current_energy()
    trace = [TraceRow(0, t0, energy, 0)]
    best_energy = energy
    best_labels = labels_flat.copy()
    best_counts = counts.copy()

    sweep_no = 0
    for k in range(schedule.sweeps):
        temperature = t0 * schedule.cooling**k
        sweep_no += 1
        accepted = run_sweep(sweep_no, temperature)
        energy = current_energy()
        trace.append(TraceRow(sweep_no, temperature, energy, accepted))
        if energy < best_energy:
            best_energy = energy
            best_labels[:] = labels_flat
            best_counts[:] = counts

    # Annealing may end on an uphill excursion; the greedy phase starts from
    # the best state seen so far, so the final energy never exceeds the
    # initial one (the start is itself a candidate for best).
    if energy > best_energy:
        labels_flat[:] = best_labels
        counts[:] = best_counts

    quiet = 0
    while quiet < schedule.greedy_quiet_sweeps:
        sweep_no += 1
        accepted = run_sweep(sweep_no, 0.0)
        trace.append(TraceRow(sweep_no, 0.0, current_energy(), accepted))
        quiet = quiet + 1 if accepted == 0 else 0

    return out, trace

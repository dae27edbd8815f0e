"""Analysis passes over minimized grids.

Junction detection and angle extraction, blow-up rescaling, deviation
(psi) estimation by local re-minimization, and the small-volume elimination
scan.  These consume :class:`~trifluid.gridmin.grid.LabelGrid` instances
produced by :func:`~trifluid.gridmin.anneal.minimize` but make no assumption
beyond the grid invariants themselves.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy import ndimage, signal

from ..tensions import EnergyParams, SurfaceTensions, neumann_angles
from .anneal import minimize
from .energy import grid_energy
from .grid import NUM_FLUIDS, LabelGrid
from .options import MinimizeOptions


class BallOutsideDomain(ValueError):
    """Raised when a requested ball is not contained in the (unfrozen) domain."""


class NoJunctionInWindow(ValueError):
    """Raised when an extraction window contains no detected triple point."""


class MultipleJunctions(ValueError):
    """Raised when an extraction window straddles several triple points."""


@dataclass(frozen=True)
class JunctionReport:
    """Measured geometry of one triple junction.

    ``angles_deg[k]`` is the angular measure (degrees) of fluid k's sector on
    the sampling circle; the three entries sum to 360 exactly.
    ``residual_vs_neumann`` is the largest absolute deviation (degrees) from
    the law-of-cosines sector openings implied by the tensions.
    """

    location: tuple[float, float]
    angles_deg: tuple[float, float, float]
    residual_vs_neumann: float


@dataclass(frozen=True)
class EliminationViolation:
    """A ball where some fluid is present but below the density threshold."""

    center: tuple[float, float]
    radius: float
    fluid: int
    area_fraction: float


class PsiEstimate(float):
    """Deviation-from-minimality estimate; a float carrying its uncertainty.

    ``spread`` is the gap between the best and worst restart minima — the
    stochastic search's own noise floor.  ``minima`` holds each restart's
    final surface energy.
    """

    spread: float
    minima: tuple[float, ...]

    def __new__(cls, value: float, spread: float, minima=()):
        obj = super().__new__(cls, value)
        obj.spread = float(spread)
        obj.minima = tuple(float(m) for m in minima)
        return obj

    def __repr__(self):
        return f"PsiEstimate({float(self):.6g}, spread={self.spread:.3g})"


# -- triple points --------------------------------------------------------


def detect_triple_points(grid: LabelGrid) -> list[tuple[float, float]]:
    """Cell corners where all three labels meet within a 2x2 neighborhood.

    Corners closer than 3h to each other are merged (their centroid is
    reported), so a junction staggered across a few cells counts once.
    """
    lab = grid.labels
    dom = grid.domain_mask
    a = lab[:-1, :-1]
    b = lab[:-1, 1:]
    c = lab[1:, :-1]
    d = lab[1:, 1:]
    all_dom = dom[:-1, :-1] & dom[:-1, 1:] & dom[1:, :-1] & dom[1:, 1:]
    # A 2x2 block holds all three labels iff min 0, max 2 and some cell is 1.
    mn = np.minimum(np.minimum(a, b), np.minimum(c, d))
    mx = np.maximum(np.maximum(a, b), np.maximum(c, d))
    has_mid = (a == 1) | (b == 1) | (c == 1) | (d == 1)
    hit = all_dom & (mn == 0) & (mx == 2) & has_mid
    rows, cols = np.nonzero(hit)
    if rows.size == 0:
        return []
    xs = (cols + 1.0) * grid.h - 0.5 * grid.width * grid.h
    ys = (rows + 1.0) * grid.h - 0.5 * grid.height * grid.h
    pts = np.column_stack([xs, ys])

    merge_r = 3.0 * grid.h
    parent = np.arange(len(pts))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if np.hypot(*(pts[i] - pts[j])) <= merge_r:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    clusters: dict[int, list[int]] = {}
    for i in range(len(pts)):
        clusters.setdefault(find(i), []).append(i)
    out = [tuple(pts[members].mean(axis=0)) for members in clusters.values()]
    out.sort()
    return [(float(x), float(y)) for x, y in out]


# -- junction angles ------------------------------------------------------


def junction_angle_extract(
    grid: LabelGrid,
    point,
    window_radius: float,
    tensions: SurfaceTensions,
    samples: int = 1440,
) -> JunctionReport:
    """Measure sector angles of the junction inside a circular window.

    Exactly one detected triple point must lie within ``window_radius`` of
    ``point``; the sampling circle of that radius around the triple point
    must be in-domain.  Each fluid's angle is its angular measure on the
    circle (nearest-cell labels), so the three angles sum to 360 degrees
    exactly; the residual compares them with the openings the tensions
    dictate.  Accuracy improves with ``window_radius / h``: label readout is
    quantized at roughly one cell, i.e. ``h / window_radius`` radians.
    """
    if window_radius <= 0:
        raise ValueError(f"window_radius must be positive, got {window_radius!r}")
    px, py = float(point[0]), float(point[1])
    hits = [
        tp
        for tp in detect_triple_points(grid)
        if math.hypot(tp[0] - px, tp[1] - py) <= window_radius
    ]
    if not hits:
        raise NoJunctionInWindow(
            f"no triple point within {window_radius:.4g} of ({px:.4g}, {py:.4g})"
        )
    if len(hits) > 1:
        raise MultipleJunctions(
            f"{len(hits)} triple points within {window_radius:.4g} of "
            f"({px:.4g}, {py:.4g}); shrink the window"
        )
    jx, jy = hits[0]

    theta = (np.arange(samples) + 0.5) * (2.0 * math.pi / samples)
    sx = jx + window_radius * np.cos(theta)
    sy = jy + window_radius * np.sin(theta)
    cols = np.floor(sx / grid.h + 0.5 * grid.width).astype(np.int64)
    rows = np.floor(sy / grid.h + 0.5 * grid.height).astype(np.int64)
    inside = (
        (cols >= 0) & (cols < grid.width) & (rows >= 0) & (rows < grid.height)
    )
    if not inside.all():
        raise BallOutsideDomain("sampling circle leaves the grid bounding box")
    if not grid.domain_mask[rows, cols].all():
        raise BallOutsideDomain("sampling circle leaves the domain")
    ring = grid.labels[rows, cols]

    fracs = np.bincount(ring, minlength=NUM_FLUIDS) / float(samples)
    angles = tuple(float(f) * 360.0 for f in fracs)

    gammas = neumann_angles(tensions)
    residual = max(
        abs(angles[k] - math.degrees(gammas.opening_of_fluid(k)))
        for k in range(NUM_FLUIDS)
    )
    return JunctionReport((jx, jy), angles, residual)


# -- blow-up --------------------------------------------------------------


def blowup_rescale(grid: LabelGrid, center, lam: float, ring_cells: int = 3) -> LabelGrid:
    """Zoom into the ball of radius ``lam * grid.extent`` about ``center``.

    Returns a grid of the same resolution whose bounding box is the unit
    square scaled so the sampled ball becomes the unit ball (``h' = 2 / min(
    width, height)``), filled by nearest-cell sampling.  The new domain is
    that unit ball; a ring of ``ring_cells`` cells inside its rim is frozen,
    so the result is directly usable as Dirichlet data for re-minimization.

    Energy bookkeeping after a zoom: interface length shrinks linearly with
    the sampling radius while the height integral shrinks faster, so a
    configuration minimizing the full energy corresponds, post-zoom, to a
    minimizer of the same functional with the gravity coefficient multiplied
    by ``lam``; iterated zooms therefore drive gravity to zero and leave the
    pure surface energy, which is the point of blowing up.
    """
    if not (0.0 < lam <= 1.0):
        raise ValueError(f"lambda must lie in (0, 1], got {lam!r}")
    cx, cy = float(center[0]), float(center[1])
    sample_r = lam * grid.extent

    xs, ys = grid.xs, grid.ys
    dist2 = (xs[None, :] - cx) ** 2 + (ys[:, None] - cy) ** 2
    ball = dist2 <= sample_r * sample_r
    if not ball.any():
        raise BallOutsideDomain("sampling ball contains no cell centers")
    if np.any(ball & ~grid.domain_mask):
        raise BallOutsideDomain(
            f"ball of radius {sample_r:.4g} about ({cx:.4g}, {cy:.4g}) "
            "is not contained in the domain"
        )

    width, height = grid.width, grid.height
    new_h = 2.0 / min(width, height)
    nxs = (np.arange(width) + 0.5) * new_h - 0.5 * width * new_h
    nys = (np.arange(height) + 0.5) * new_h - 0.5 * height * new_h
    # new cell at p' samples the old configuration at center + sample_r * p'
    ox = cx + sample_r * nxs
    oy = cy + sample_r * nys
    cols = np.clip(np.floor(ox / grid.h + 0.5 * width).astype(np.int64), 0, width - 1)
    rows = np.clip(
        np.floor(oy / grid.h + 0.5 * height).astype(np.int64), 0, height - 1
    )
    labels = grid.labels[rows[:, None], cols[None, :]].copy()

    nd2 = nxs[None, :] ** 2 + nys[:, None] ** 2
    domain = nd2 <= 1.0
    size = 2 * ring_cells + 1
    deep = ndimage.binary_erosion(domain, np.ones((size, size), bool), border_value=0)
    frozen = domain & ~deep
    return LabelGrid(width, height, new_h, labels, domain, frozen)


# -- psi ------------------------------------------------------------------


def _parse_ball(ball):
    if np.isscalar(ball):
        return (0.0, 0.0), float(ball)
    center, radius = ball
    return (float(center[0]), float(center[1])), float(radius)


def psi_estimate(
    grid: LabelGrid,
    p: EnergyParams,
    ball,
    opts: MinimizeOptions | None = None,
    restarts: int = 5,
) -> PsiEstimate:
    """How far the configuration is from surface-energy minimality in a ball.

    ``ball`` is a radius (centered at the origin) or a ``(center, radius)``
    pair and must lie strictly inside the unfrozen domain.  Everything
    outside the ball is frozen and the inside is re-minimized ``restarts``
    times (seeds ``opts.seed + i``) against the surface energy alone; the
    estimate is the current surface energy minus the best minimum found.
    It is nonnegative by construction — the search only ever improves on the
    current state — and a stochastic lower bound on the true deviation: the
    reported ``spread`` across restarts quantifies, but cannot eliminate,
    the gap to the exact infimum.

    Restarts run concurrently in a thread pool sized by ``TFL_THREADS``
    (default: one worker per restart); each works on its own grid copy.
    """
    if opts is None:
        opts = MinimizeOptions()
    (cx, cy), radius = _parse_ball(ball)
    if radius <= 0:
        raise ValueError(f"ball radius must be positive, got {radius!r}")

    xs, ys = grid.xs, grid.ys
    dist2 = (xs[None, :] - cx) ** 2 + (ys[:, None] - cy) ** 2
    ball_mask = dist2 <= radius * radius
    if not ball_mask.any():
        raise BallOutsideDomain("ball contains no cell centers")
    if np.any(ball_mask & ~grid.unfrozen_mask):
        raise BallOutsideDomain(
            f"ball of radius {radius:.4g} about ({cx:.4g}, {cy:.4g}) is not "
            "strictly inside the unfrozen domain"
        )

    local = LabelGrid(
        grid.width,
        grid.height,
        grid.h,
        grid.labels.copy(),
        grid.domain_mask.copy(),
        grid.frozen_mask | (grid.domain_mask & ~ball_mask),
    )
    surface_only = EnergyParams(sigmas=p.sigmas)
    current = grid_energy(local, surface_only).surface

    def one_restart(i: int) -> float:
        sub_opts = replace(opts, mode="D", seed=opts.seed + i)
        result, _ = minimize(local, surface_only, sub_opts)
        return grid_energy(result, surface_only).surface

    workers = int(os.environ.get("TFL_THREADS", "0")) or restarts
    workers = max(1, min(workers, restarts))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        minima = list(pool.map(one_restart, range(restarts)))

    best = min(minima)
    return PsiEstimate(current - best, max(minima) - best, minima)


# -- elimination ----------------------------------------------------------


def _disk_kernel(radius_cells: float) -> np.ndarray:
    m = int(math.floor(radius_cells))
    span = np.arange(-m, m + 1)
    return (span[None, :] ** 2 + span[:, None] ** 2 <= radius_cells**2).astype(
        np.float64
    )


def _counts_in_disks(indicator: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    conv = signal.fftconvolve(indicator, kernel, mode="same")
    return np.rint(conv).astype(np.int64)


def elimination_scan(
    grid: LabelGrid, eta: float = 0.05, radii=None
) -> list[EliminationViolation]:
    """Scan for fluids present near a ball's center yet tiny in the ball.

    For each sampled center x (every cell whose ball lies fully in-domain)
    and each radius rho, a fluid violates elimination when its area in
    B_rho(x) is at most ``eta * rho**2`` while it still has cells in
    B_{rho/2}(x): a minimizer should have flushed such slivers out of the
    half ball.  Violating cells are clustered (connected components) and one
    violation per cluster is reported with its centroid.

    ``radii`` defaults to ``(0.05, 0.1, 0.2) * grid.extent``.
    """
    if not (0.0 < eta):
        raise ValueError(f"eta must be positive, got {eta!r}")
    if radii is None:
        radii = [f * grid.extent for f in (0.05, 0.1, 0.2)]
    cell_area = grid.h * grid.h
    dom = grid.domain_mask.astype(np.float64)
    indicators = [
        ((grid.labels == j) & grid.domain_mask).astype(np.float64)
        for j in range(NUM_FLUIDS)
    ]
    violations: list[EliminationViolation] = []
    for rho in sorted(float(r) for r in radii):
        if rho <= 0:
            raise ValueError(f"radii must be positive, got {rho!r}")
        full_k = _disk_kernel(rho / grid.h)
        half_k = _disk_kernel(0.5 * rho / grid.h)
        covered = _counts_in_disks(dom, full_k) == int(full_k.sum())
        if not covered.any():
            continue
        for j in range(NUM_FLUIDS):
            full_counts = _counts_in_disks(indicators[j], full_k)
            half_counts = _counts_in_disks(indicators[j], half_k)
            bad = (
                covered
                & (full_counts.astype(np.float64) * cell_area <= eta * rho * rho)
                & (half_counts > 0)
            )
            if not bad.any():
                continue
            comp, n_comp = ndimage.label(bad)
            for ci in range(1, n_comp + 1):
                rows, cols = np.nonzero(comp == ci)
                cx = float(grid.xs[cols].mean())
                cy = float(grid.ys[rows].mean())
                worst = float(full_counts[rows, cols].min()) * cell_area
                violations.append(
                    EliminationViolation((cx, cy), rho, j, worst / (rho * rho))
                )
    return violations

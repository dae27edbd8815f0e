"""Ready-made grid configurations for experiments and tests."""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from ..tensions import SurfaceTensions, neumann_angles
from .grid import LabelGrid


def _frozen_ring(domain: np.ndarray, ring_cells: int) -> np.ndarray:
    size = 2 * ring_cells + 1
    deep = ndimage.binary_erosion(domain, np.ones((size, size), bool), border_value=0)
    return domain & ~deep


def make_disk_dirichlet_grid(
    n: int,
    tensions: SurfaceTensions,
    theta0: float = 0.0,
    ring_cells: int = 3,
) -> LabelGrid:
    """Unit-disk domain with three boundary arcs sized to the sector openings.

    The domain is the unit ball inscribed in an ``n x n`` grid
    (``h = 2 / n``).  Starting at angle ``theta0``, fluid 0 occupies an arc
    equal to its tension-dictated sector opening, then fluid 1, then fluid 2
    (for equal tensions: three 120-degree arcs).  Labels are initialized by
    angle everywhere — boundary data and interior alike — so the start is the
    straight-ray cone joining the arc endpoints to the center; annealing then
    roughens and re-settles it under the discrete energy.  A ring of
    ``ring_cells`` cells inside the rim is frozen as Dirichlet data.
    """
    if n < 8:
        raise ValueError(f"grid side must be at least 8 cells, got {n}")
    h = 2.0 / n
    coords = (np.arange(n) + 0.5) * h - 1.0
    xs = coords[None, :]
    ys = coords[:, None]
    domain = xs**2 + ys**2 <= 1.0

    gammas = neumann_angles(tensions)
    b1 = gammas.opening_of_fluid(0)
    b2 = b1 + gammas.opening_of_fluid(1)
    theta = np.mod(np.arctan2(ys, xs) - theta0, 2.0 * math.pi)
    labels = np.full((n, n), 2, dtype=np.uint8)
    labels[theta < b2] = 1
    labels[theta < b1] = 0

    return LabelGrid(n, n, h, labels, domain, _frozen_ring(domain, ring_cells))


def make_twisted_cone_grid(
    n: int,
    tensions: SurfaceTensions,
    twists_deg: tuple[float, float, float] = (30.0, -20.0, 10.0),
    theta0: float = 0.0,
    ring_cells: int = 3,
) -> LabelGrid:
    """Unit-disk grid whose separatrices bend away from the tension angles.

    The three interface rays leave the origin in the directions the tensions
    dictate but each is rotated by ``twists_deg[k] * r`` at radius ``r``, so
    the sector openings equal the ideal ones only in the limit r -> 0 and are
    distorted by a known, radius-proportional amount further out.  Zooming
    into the junction therefore shrinks the measured angle residual in a
    controlled way, which makes these grids the natural exercise for the
    blow-up pipeline.  The twist differences must stay below the smallest
    sector opening so the separatrices never cross inside the disk.
    """
    if n < 8:
        raise ValueError(f"grid side must be at least 8 cells, got {n}")
    gammas = neumann_angles(tensions)
    bases = (
        theta0,
        theta0 + gammas.opening_of_fluid(0),
        theta0 + gammas.opening_of_fluid(0) + gammas.opening_of_fluid(1),
    )
    twists = tuple(math.radians(t) for t in twists_deg)
    min_opening = min(gammas.opening_of_fluid(k) for k in range(3))
    worst = max(
        abs(twists[(k + 1) % 3] - twists[k]) for k in range(3)
    )
    if worst >= min_opening:
        raise ValueError(
            "twist differences reach the smallest sector opening; "
            "separatrices would cross inside the disk"
        )

    h = 2.0 / n
    coords = (np.arange(n) + 0.5) * h - 1.0
    xs = coords[None, :]
    ys = coords[:, None]
    r = np.hypot(xs, ys)
    domain = r <= 1.0
    theta = np.arctan2(ys, xs)

    two_pi = 2.0 * math.pi
    u = np.mod(theta - (bases[0] + twists[0] * r), two_pi)
    d1 = np.mod((bases[1] + twists[1] * r) - (bases[0] + twists[0] * r), two_pi)
    d2 = np.mod((bases[2] + twists[2] * r) - (bases[0] + twists[0] * r), two_pi)
    labels = np.full((n, n), 2, dtype=np.uint8)
    labels[u < d2] = 1
    labels[u < d1] = 0

    return LabelGrid(n, n, h, labels, domain, _frozen_ring(domain, ring_cells))


def make_vertical_split_grid(n: int) -> LabelGrid:
    """Unit square (``h = 1/n``), fluid 0 left of x = 0, fluid 1 right.

    For even ``n`` the interface is the segment x = 0 of length exactly 1.
    """
    if n < 2 or n % 2:
        raise ValueError(f"grid side must be even and >= 2, got {n}")
    h = 1.0 / n
    labels = np.zeros((n, n), dtype=np.uint8)
    labels[:, n // 2 :] = 1
    return LabelGrid(n, n, h, labels)


def make_disk_speck_grid(n: int, radius: float = 0.3, fluid: int = 1) -> LabelGrid:
    """Unit square (``h = 1/n``) with a centered disk of another fluid.

    The disk has circumference ``2 * pi * radius``; the background is
    fluid 0.
    """
    if n < 2:
        raise ValueError(f"grid side must be >= 2, got {n}")
    if not (0.0 < radius < 0.5):
        raise ValueError(f"radius must lie in (0, 0.5), got {radius!r}")
    h = 1.0 / n
    coords = (np.arange(n) + 0.5) * h - 0.5
    inside = coords[None, :] ** 2 + coords[:, None] ** 2 <= radius * radius
    labels = np.where(inside, np.uint8(fluid), np.uint8(0))
    return LabelGrid(n, n, h, labels)


def add_speck(grid: LabelGrid, point, fluid: int) -> LabelGrid:
    """Copy of ``grid`` with the single cell at ``point`` relabeled."""
    if not 0 <= fluid <= 2:
        raise ValueError(f"fluid must be 0, 1 or 2, got {fluid!r}")
    row, col = grid.cell_of(point)
    if not grid.domain_mask[row, col]:
        raise ValueError(f"point {tuple(point)!r} is outside the domain")
    if grid.frozen_mask[row, col]:
        raise ValueError(f"cell at {tuple(point)!r} is frozen")
    out = grid.copy()
    out.labels[row, col] = fluid
    return out

"""Crofton-style perimeter estimation on label grids.

Interface length is estimated by counting label transitions along a small
family of lattice offsets and weighting each count by a per-direction length
quantum.  For a long straight interface with unit normal ``nu``, the number
of cell pairs ``(x, x + v)`` straddling it is ``L / h * |v . nu|``, so the
estimate is exact for every orientation at which

    sum_v  w_v * |v . nu| = 1

holds.  The weights are calibrated by solving that equation exactly at one
orientation per direction class (the classes are orbits under the dihedral
symmetry of the lattice); in between, the estimate errs high by at most
about 8.2% (4 directions), 2.75% (8) or 1.31% (16).  Averaged over all
orientations — the relevant figure for smooth curves such as circles — the
bias is about +1.44% for the default 8-direction family.

All weights come out strictly positive, which the module asserts at
calibration time; positivity is what makes the discrete energy a sum of
nonnegative pair penalties and the annealer's move deltas meaningful.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from .grid import NUM_FLUIDS, LabelGrid

#: index of each unordered pair within per-pair count vectors
PAIR_ORDER = ((0, 1), (0, 2), (1, 2))
_PAIR_SLOT = {(0, 1): 0, (0, 2): 1, (1, 2): 2}

# Direction classes per family size.  Each class lists one representative
# offset per unordered +-v pair; counting (x, x+v) over the whole grid then
# sees every neighboring pair exactly once.
_FAMILIES: dict[int, tuple[tuple[str, tuple[tuple[int, int], ...]], ...]] = {
    4: (
        ("axis", ((1, 0), (0, 1))),
        ("diag", ((1, 1), (1, -1))),
    ),
    8: (
        ("axis", ((1, 0), (0, 1))),
        ("diag", ((1, 1), (1, -1))),
        ("knight21", ((2, 1), (1, 2), (-1, 2), (-2, 1))),
    ),
    16: (
        ("axis", ((1, 0), (0, 1))),
        ("diag", ((1, 1), (1, -1))),
        ("knight21", ((2, 1), (1, 2), (-1, 2), (-2, 1))),
        ("knight31", ((3, 1), (1, 3), (-1, 3), (-3, 1))),
        ("knight32", ((3, 2), (2, 3), (-2, 3), (-3, 2))),
    ),
}

# Calibration orientations (interface-normal angles): one per class, chosen
# as the normals the classes themselves single out.
_CALIBRATION_ANGLES: dict[int, tuple[float, ...]] = {
    4: (0.0, math.pi / 4),
    8: (0.0, math.pi / 4, math.atan2(1.0, 2.0)),
    16: (
        0.0,
        math.pi / 4,
        math.atan2(1.0, 2.0),
        math.atan2(1.0, 3.0),
        math.atan2(2.0, 3.0),
    ),
}


@functools.lru_cache(maxsize=None)
def direction_family(directions: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """Offsets and calibrated weights for a family size.

    Returns ``(offsets, weights)`` where ``offsets`` is an ``(K, 2)`` int64
    array of ``(dx, dy)`` and ``weights`` the per-offset length quantum in
    units of the cell size ``h`` (multiply by ``h`` for physical length).
    """
    if directions not in _FAMILIES:
        raise ValueError(
            f"directions must be one of {sorted(_FAMILIES)}, got {directions!r}"
        )
    classes = _FAMILIES[directions]
    angles = _CALIBRATION_ANGLES[directions]
    a = np.zeros((len(angles), len(classes)))
    for i, phi in enumerate(angles):
        nu = (math.cos(phi), math.sin(phi))
        for j, (_, offs) in enumerate(classes):
            a[i, j] = sum(abs(dx * nu[0] + dy * nu[1]) for dx, dy in offs)
    class_w = np.linalg.solve(a, np.ones(len(angles)))
    if not np.all(class_w > 0.0):
        raise AssertionError(
            f"calibration produced non-positive weights {class_w} "
            f"for the {directions}-direction family"
        )
    offsets = []
    weights = []
    for w, (_, offs) in zip(class_w, classes):
        for dx, dy in offs:
            offsets.append((dx, dy))
            weights.append(w)
    out_off = np.array(offsets, dtype=np.int64)
    out_w = np.array(weights, dtype=np.float64)
    out_off.setflags(write=False)
    out_w.setflags(write=False)
    return out_off, out_w


def max_offset_reach(directions: int = 8) -> int:
    """Largest Chebyshev norm among the family's offsets (ring thickness)."""
    offsets, _ = direction_family(directions)
    return int(np.abs(offsets).max())


def transition_counts(grid: LabelGrid, directions: int = 8) -> np.ndarray:
    """Per-offset, per-pair transition counts.

    Returns an ``(K, 3)`` int64 array; column order follows ``PAIR_ORDER``.
    Only pairs with both cells in-domain are counted, each neighboring pair
    exactly once.
    """
    offsets, _ = direction_family(directions)
    labels = grid.labels
    domain = grid.domain_mask
    height, width = labels.shape
    out = np.zeros((len(offsets), len(PAIR_ORDER)), dtype=np.int64)
    for k, (dx, dy) in enumerate(offsets):
        y0, y1 = max(0, -dy), min(height, height - dy)
        x0, x1 = max(0, -dx), min(width, width - dx)
        if y0 >= y1 or x0 >= x1:
            continue
        a = labels[y0:y1, x0:x1]
        b = labels[y0 + dy : y1 + dy, x0 + dx : x1 + dx]
        both = domain[y0:y1, x0:x1] & domain[y0 + dy : y1 + dy, x0 + dx : x1 + dx]
        m = both & (a != b)
        if not m.any():
            continue
        lo = np.minimum(a[m], b[m])
        hi = np.maximum(a[m], b[m])
        key = lo * NUM_FLUIDS + hi
        bc = np.bincount(key, minlength=NUM_FLUIDS * NUM_FLUIDS)
        out[k, 0] = bc[1]  # (0, 1)
        out[k, 1] = bc[2]  # (0, 2)
        out[k, 2] = bc[5]  # (1, 2)
    return out


def perimeter_by_pair(grid: LabelGrid, directions: int = 8) -> dict[tuple[int, int], float]:
    """Estimated interface length for each unordered fluid pair."""
    _, weights = direction_family(directions)
    counts = transition_counts(grid, directions)
    per = weights @ counts.astype(np.float64) * grid.h
    return {pair: float(per[i]) for i, pair in enumerate(PAIR_ORDER)}


def crofton_perimeter(grid: LabelGrid, pair=None, directions: int = 8) -> float:
    """Estimated length of one interface, or of all interfaces combined.

    ``pair`` is an unordered fluid pair such as ``(0, 1)``; ``None`` sums
    over all three pairs.
    """
    per = perimeter_by_pair(grid, directions)
    if pair is None:
        return float(sum(per.values()))
    key = (min(pair), max(pair))
    if key not in _PAIR_SLOT:
        raise ValueError(f"not an unordered pair of distinct fluids: {pair!r}")
    return per[key]

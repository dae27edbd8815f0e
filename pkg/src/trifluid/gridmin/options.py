"""Options, schedules and error types for the discrete minimizer."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class InfeasibleVolumes(ValueError):
    """Raised when volume targets cannot be met by the unfrozen cells."""


class FrozenRingTooThin(ValueError):
    """Raised in Dirichlet modes when boundary data is not thick enough.

    Every unfrozen in-domain cell must be farther (in Chebyshev distance,
    measured in cells) from the domain boundary than the longest offset used
    by the perimeter estimate, otherwise flips at the rim would see a
    truncated neighborhood and the boundary data would not act as fixed
    exterior data.
    """


_MODES = ("D", "V", "DV")


@dataclass(frozen=True)
class AnnealSchedule:
    """Cooling schedule for simulated annealing over single-cell relabels.

    ``t0 = None`` resolves to ``max_sigma * h`` at run time: the scale of a
    single-cell surface-energy change, so early sweeps accept a healthy
    fraction of uphill moves.  After ``sweeps`` annealing sweeps with
    geometric cooling, a zero-temperature greedy phase runs until
    ``greedy_quiet_sweeps`` consecutive sweeps accept nothing.
    """

    t0: float | None = None
    cooling: float = 0.95
    sweeps: int = 400
    greedy_quiet_sweeps: int = 3

    def __post_init__(self):
        if self.t0 is not None and not (math.isfinite(self.t0) and self.t0 > 0):
            raise ValueError(f"t0 must be positive and finite, got {self.t0!r}")
        if not (0.0 < self.cooling < 1.0):
            raise ValueError(f"cooling must lie in (0, 1), got {self.cooling!r}")
        if self.sweeps < 0:
            raise ValueError(f"sweeps must be >= 0, got {self.sweeps!r}")
        if self.greedy_quiet_sweeps < 1:
            raise ValueError(
                f"greedy_quiet_sweeps must be >= 1, got {self.greedy_quiet_sweeps!r}"
            )


@dataclass(frozen=True)
class MinimizeOptions:
    """Configuration for :func:`trifluid.gridmin.minimize`.

    mode
        ``"D"``: Dirichlet — the frozen ring is boundary data, volumes free.
        ``"V"``: volume-constrained via soft penalty, no frozen ring needed.
        ``"DV"``: both.
    target_volumes
        Per-fluid areas (length^2 units), required in V/DV modes.  They are
        resolved to integer cell counts (largest-remainder rounding) that sum
        exactly to the number of unfrozen in-domain cells; the totals must
        agree within one cell area up front.  Volumes are counted over the
        cells the minimizer controls, i.e. unfrozen in-domain cells.
    volume_penalty_C
        Penalty coefficient; ``None`` resolves to ``4 * max_sigma / h``,
        which makes a one-cell volume violation cost more than the largest
        surface-energy gain any single flip can produce, so converged volumes
        are pinned to the targets.
    crofton_directions
        Size of the direction family for the perimeter estimate (4, 8 or 16).
    seed
        Seeds the PCG64 generator that drives proposal order, proposal labels
        and acceptance thresholds; identical options and grid give an
        identical trajectory.
    """

    mode: str = "D"
    target_volumes: tuple[float, float, float] | None = None
    volume_penalty_C: float | None = None
    schedule: AnnealSchedule = field(default_factory=AnnealSchedule)
    crofton_directions: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {self.mode!r}")
        if self.uses_volume_penalty:
            if self.target_volumes is None:
                raise ValueError(f"mode {self.mode!r} requires target_volumes")
            if len(self.target_volumes) != 3:
                raise ValueError("target_volumes must have three entries")
            for v in self.target_volumes:
                if not (math.isfinite(v) and v >= 0.0):
                    raise InfeasibleVolumes(
                        f"target volumes must be finite and >= 0, got {v!r}"
                    )
        if self.volume_penalty_C is not None and not (
            math.isfinite(self.volume_penalty_C) and self.volume_penalty_C > 0
        ):
            raise ValueError(
                f"volume_penalty_C must be positive, got {self.volume_penalty_C!r}"
            )
        if self.crofton_directions not in (4, 8, 16):
            raise ValueError(
                f"crofton_directions must be 4, 8 or 16, got {self.crofton_directions!r}"
            )

    @property
    def uses_volume_penalty(self) -> bool:
        return self.mode in ("V", "DV")

    @property
    def uses_dirichlet(self) -> bool:
        return self.mode in ("D", "DV")

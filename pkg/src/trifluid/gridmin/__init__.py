"""Discrete three-fluid energy minimization on labeled cell grids.

The submodules split along the pipeline: :mod:`grid` holds the state and its
serialization, :mod:`crofton` the perimeter estimate, :mod:`energy` the
discrete functional, :mod:`kernels`/:mod:`backend` the annealing sweep and
its compilation, :mod:`anneal` the minimizer, :mod:`analyze` the junction /
blow-up / deviation / elimination passes, and :mod:`setups` ready-made
configurations.
"""

from .analyze import (
    BallOutsideDomain,
    EliminationViolation,
    JunctionReport,
    MultipleJunctions,
    NoJunctionInWindow,
    PsiEstimate,
    blowup_rescale,
    detect_triple_points,
    elimination_scan,
    junction_angle_extract,
    psi_estimate,
)
from .anneal import TraceRow, check_frozen_ring, minimize
from .backend import backend_name, get_sweep, reset_backend
from .crofton import (
    PAIR_ORDER,
    crofton_perimeter,
    direction_family,
    max_offset_reach,
    perimeter_by_pair,
    transition_counts,
)
from .energy import (
    EnergyBreakdown,
    boundary_edge_lengths,
    default_penalty_coefficient,
    grid_energy,
    resolve_volume_targets,
)
from .grid import NUM_FLUIDS, TFL_MAGIC, LabelGrid
from .options import (
    AnnealSchedule,
    FrozenRingTooThin,
    InfeasibleVolumes,
    MinimizeOptions,
)
from .setups import (
    add_speck,
    make_disk_dirichlet_grid,
    make_disk_speck_grid,
    make_twisted_cone_grid,
    make_vertical_split_grid,
)

__all__ = [
    "AnnealSchedule",
    "BallOutsideDomain",
    "EliminationViolation",
    "EnergyBreakdown",
    "FrozenRingTooThin",
    "InfeasibleVolumes",
    "JunctionReport",
    "LabelGrid",
    "MinimizeOptions",
    "MultipleJunctions",
    "NoJunctionInWindow",
    "NUM_FLUIDS",
    "PAIR_ORDER",
    "PsiEstimate",
    "TFL_MAGIC",
    "TraceRow",
    "add_speck",
    "backend_name",
    "blowup_rescale",
    "boundary_edge_lengths",
    "check_frozen_ring",
    "crofton_perimeter",
    "default_penalty_coefficient",
    "detect_triple_points",
    "direction_family",
    "elimination_scan",
    "get_sweep",
    "grid_energy",
    "junction_angle_extract",
    "make_disk_dirichlet_grid",
    "make_disk_speck_grid",
    "make_twisted_cone_grid",
    "make_vertical_split_grid",
    "max_offset_reach",
    "minimize",
    "perimeter_by_pair",
    "psi_estimate",
    "reset_backend",
    "resolve_volume_targets",
    "transition_counts",
]

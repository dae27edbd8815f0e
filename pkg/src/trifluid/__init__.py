"""trifluid: three-fluid planar energy minimization and cone analysis.

The library has two halves.  The exact half works on closed-form
objects: surface tensions and the angles they induce (`tensions`), the
weighted Fermat problem and good triangles (`fermat`), polygonal
configurations with their energies, monotonicity quantities, and
first-variation residuals (`polyconfig`), and labeled cones with their
improvement mechanisms (`cones`).  The discrete half (`gridmin`)
minimizes the full energy over labeled grids by simulated annealing and
extracts geometric measurements from the results.
"""

from .tensions import (
    AlphaWeights,
    EnergyParams,
    NeumannAngles,
    StrictTriangularityViolated,
    SurfaceTensions,
    alphas_from_sigmas,
    neumann_angles,
)
from .fermat import (
    FermatSolution,
    FermatWeights,
    GoodTriangle,
    NoInteriorMinimum,
    NonConvergence,
    OpeningTooWide,
    VertexSingularity,
    construct_good_triangle,
    fermat_cost,
    fermat_gradient,
    fermat_hessian,
    fermat_solve,
    junction_angles,
)
from .geometry import QuadratureFailure, adaptive_simpson
from .polyconfig import (
    Interface,
    MonotonicityTrace,
    NotStationary,
    PolyConfig,
    PolyEnergyBreakdown,
    RegionLoop,
    TangentialCrossing,
    TestField,
    WeakMonotonicityTerms,
    compute_monotonicity_trace,
    config_from_json,
    config_to_json,
    conical_projection,
    energy_FS,
    energy_FSWP,
    first_variation_residual,
    fourth_power_integral,
    gamma_deviation,
    make_chord_config,
    sharp_monotonicity_check,
    stationarity_battery,
    weak_monotonicity_terms,
)
from .cones import (
    ConeConfig,
    DiskTooSmall,
    ImprovementReport,
    Mechanism,
    RectanglePatch,
    Sector,
    classify_cone,
    cone_energy,
    cone_to_polyconfig,
    detect_fill_in,
    rectangle_volume_fix,
    scaled_energy_p,
)
from . import gridmin, svg
from .gridmin import (
    AnnealSchedule,
    EnergyBreakdown,
    LabelGrid,
    MinimizeOptions,
    crofton_perimeter,
    grid_energy,
    minimize,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaWeights",
    "AnnealSchedule",
    "ConeConfig",
    "DiskTooSmall",
    "EnergyBreakdown",
    "EnergyParams",
    "FermatSolution",
    "FermatWeights",
    "GoodTriangle",
    "ImprovementReport",
    "Interface",
    "LabelGrid",
    "Mechanism",
    "MinimizeOptions",
    "MonotonicityTrace",
    "NeumannAngles",
    "NoInteriorMinimum",
    "NonConvergence",
    "NotStationary",
    "OpeningTooWide",
    "PolyConfig",
    "PolyEnergyBreakdown",
    "QuadratureFailure",
    "RectanglePatch",
    "RegionLoop",
    "Sector",
    "StrictTriangularityViolated",
    "SurfaceTensions",
    "TangentialCrossing",
    "TestField",
    "VertexSingularity",
    "WeakMonotonicityTerms",
    "adaptive_simpson",
    "alphas_from_sigmas",
    "classify_cone",
    "compute_monotonicity_trace",
    "cone_energy",
    "cone_to_polyconfig",
    "config_from_json",
    "config_to_json",
    "conical_projection",
    "construct_good_triangle",
    "crofton_perimeter",
    "detect_fill_in",
    "energy_FS",
    "energy_FSWP",
    "fermat_cost",
    "fermat_gradient",
    "fermat_hessian",
    "fermat_solve",
    "first_variation_residual",
    "fourth_power_integral",
    "gamma_deviation",
    "grid_energy",
    "gridmin",
    "junction_angles",
    "make_chord_config",
    "minimize",
    "neumann_angles",
    "rectangle_volume_fix",
    "scaled_energy_p",
    "sharp_monotonicity_check",
    "stationarity_battery",
    "svg",
    "weak_monotonicity_terms",
]

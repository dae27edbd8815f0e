"""Planar cone configurations and their improvement mechanisms.

A cone is a partition of the plane into labeled angular sectors about
the origin; its energy in a disk is carried entirely by the boundary
rays.  Two competitor constructions can certify that a cone is not
minimizing: filling a wedge flanked by a single fluid with that fluid
(a chord shortcut near the origin), and replacing a junction whose
sector opening falls short of its Neumann angle by the good-triangle
configuration through the weighted Fermat point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .fermat import FermatWeights, construct_good_triangle, fermat_cost
from .polyconfig import Interface, PolyConfig
from .tensions import SurfaceTensions, neumann_angles

_TWO_PI = 2.0 * math.pi


class DiskTooSmall(ValueError):
    """Requested volume corrections do not fit inside the disk."""


class Mechanism(str, enum.Enum):
    TWO_FLUID_FILL_IN = "two_fluid_fill_in"
    GOOD_TRIANGLE_REPLACEMENT = "good_triangle_replacement"


@dataclass(frozen=True)
class Sector:
    """One angular sector [start, end) with a fluid label."""

    label: int
    start: float
    end: float

    def __post_init__(self):
        if self.label not in (0, 1, 2):
            raise ValueError("sector label must be 0, 1, or 2")
        if not (math.isfinite(self.start) and math.isfinite(self.end)):
            raise ValueError("sector angles must be finite")
        if self.end <= self.start:
            raise ValueError("sector must have positive opening (end > start)")

    @property
    def opening(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class ConeConfig:
    """Counter-clockwise sectors partitioning one full turn about the origin."""

    sectors: tuple[Sector, ...]

    def __post_init__(self):
        sectors = tuple(self.sectors)
        if not sectors:
            raise ValueError("a cone needs at least one sector")
        object.__setattr__(self, "sectors", sectors)
        n = len(sectors)
        for k in range(n - 1):
            if abs(sectors[k].end - sectors[k + 1].start) > 1e-12:
                raise ValueError(f"sector {k} ends at {sectors[k].end}, sector {k + 1} starts at {sectors[k + 1].start}")
        total = sectors[-1].end - sectors[0].start
        if abs(total - _TWO_PI) > 1e-12:
            raise ValueError(f"sector openings must cover one full turn, got {total}")
        if n > 1:
            for k in range(n):
                if sectors[k].label == sectors[(k + 1) % n].label:
                    raise ValueError(f"cyclically adjacent sectors {k} and {(k + 1) % n} share a label")

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(s.label for s in self.sectors)

    def rays(self):
        """Boundary rays as (angle, label_cw, label_ccw); ray k is the
        common edge of sector k and sector k+1 (cyclically)."""
        n = len(self.sectors)
        if n == 1:
            return []
        return [
            (self.sectors[k].end, self.sectors[k].label, self.sectors[(k + 1) % n].label)
            for k in range(n)
        ]


@dataclass(frozen=True)
class ImprovementReport:
    """Outcome of a competitor search; energy_delta < 0 iff improvable."""

    improvable: bool
    mechanism: Mechanism | None
    energy_delta: float
    competitor: PolyConfig | None
    disk_radius: float
    sector_index: int | None = None

    def __post_init__(self):
        if self.improvable != (self.energy_delta < 0.0):
            raise ValueError("improvable must hold exactly when energy_delta < 0")
        if self.improvable and self.competitor is None:
            raise ValueError("an improvable report must carry a competitor")


def _unit(angle: float) -> np.ndarray:
    return np.array([math.cos(angle), math.sin(angle)])


def cone_energy(c: ConeConfig, s: SurfaceTensions, r: float) -> float:
    """Energy of the cone inside B_r: r times the sum of ray tensions."""
    if not (r > 0.0):
        raise ValueError("radius must be positive")
    return r * sum(s.pair(a, b) for _, a, b in c.rays())


def scaled_energy_p(c: ConeConfig, s: SurfaceTensions, t: float, C: float = 0.0) -> float:
    """p(t) = t^{-1} energy(B_t) + C t^2; exactly t-independent at C = 0."""
    if not (t > 0.0):
        raise ValueError("t must be positive")
    return cone_energy(c, s, t) / t + C * t * t


def cone_to_polyconfig(c: ConeConfig, s: SurfaceTensions, disk_radius: float = 1.0) -> PolyConfig:
    """Render the cone's rays as a polyline configuration on a disk."""
    if not (disk_radius > 0.0):
        raise ValueError("disk radius must be positive")
    ifaces = []
    for angle, a, b in c.rays():
        pair = (min(a, b), max(a, b))
        ifaces.append(Interface(pair=pair, points=np.array([[0.0, 0.0], (disk_radius * _unit(angle)).tolist()])))
    return PolyConfig(domain_radius=disk_radius, tensions=s, interfaces=tuple(ifaces), regions=None)


def _fill_in_candidates(c: ConeConfig):
    """Indices k whose sector is flanked by one and the same fluid."""
    labels = c.labels
    n = len(labels)
    if n < 2:
        return []
    return [k for k in range(n) if labels[(k - 1) % n] == labels[(k + 1) % n] and labels[(k - 1) % n] != labels[k]]


def detect_fill_in(
    c: ConeConfig,
    s: SurfaceTensions,
    disk_radius: float = 1.0,
    fill_radius_frac: float = 0.1,
) -> ImprovementReport:
    """Search for the two-fluid fill-in competitor.

    A sector flanked on both sides by the same fluid is truncated at
    radius r0 = fill_radius_frac * disk_radius and the wedge tip filled
    with the flanking fluid behind the chord; the gain per unit tension
    is 2 r0 (sin(opening/2) - 1), strictly negative away from a straight
    opening.  Wedges with opening >= pi are skipped (the chord would
    leave the wedge); whenever any flanked sector exists, one with
    opening < pi exists too.
    """
    r0 = fill_radius_frac * disk_radius
    if not (0.0 < r0 < disk_radius):
        raise ValueError("fill radius must be a positive fraction of the disk")
    best = None
    n = len(c.sectors)
    for k in _fill_in_candidates(c):
        op = c.sectors[k].opening
        if op >= math.pi - 1e-12:
            continue
        flank = c.labels[(k - 1) % n]
        mid = c.labels[k]
        sigma = s.pair(min(flank, mid), max(flank, mid))
        delta = 2.0 * r0 * sigma * (math.sin(0.5 * op) - 1.0)
        if best is None or delta < best[0]:
            best = (delta, k)
    if best is None:
        return ImprovementReport(
            improvable=False,
            mechanism=None,
            energy_delta=0.0,
            competitor=None,
            disk_radius=disk_radius,
        )
    delta, k = best
    competitor = _fill_in_competitor(c, s, k, r0, disk_radius)
    return ImprovementReport(
        improvable=True,
        mechanism=Mechanism.TWO_FLUID_FILL_IN,
        energy_delta=delta,
        competitor=competitor,
        disk_radius=disk_radius,
        sector_index=k,
    )


def _fill_in_competitor(
    c: ConeConfig, s: SurfaceTensions, k: int, r0: float, disk_radius: float
) -> PolyConfig:
    """All rays, with sector k's pair truncated at r0 and closed by the chord."""
    n = len(c.sectors)
    sector = c.sectors[k]
    flank = c.labels[(k - 1) % n]
    pair = (min(flank, sector.label), max(flank, sector.label))
    a0, a1 = sector.start, sector.end
    A = r0 * _unit(a0)
    B = r0 * _unit(a1)
    ifaces = []
    for angle, la, lb in c.rays():
        p = (min(la, lb), max(la, lb))
        if abs(angle - a0) <= 1e-12 or abs(angle - a0 - _TWO_PI) <= 1e-12:
            ifaces.append(Interface(pair=p, points=np.array([A, disk_radius * _unit(angle)])))
        elif abs(angle - a1) <= 1e-12:
            ifaces.append(Interface(pair=p, points=np.array([B, disk_radius * _unit(angle)])))
        else:
            ifaces.append(Interface(pair=p, points=np.array([[0.0, 0.0], (disk_radius * _unit(angle)).tolist()])))
    ifaces.append(Interface(pair=pair, points=np.array([A, B])))
    return PolyConfig(domain_radius=disk_radius, tensions=s, interfaces=tuple(ifaces), regions=None)


def _role_tensions(s: SurfaceTensions, m: int, ccw: int, cw: int) -> SurfaceTensions:
    """Relabel tensions so the sector fluid is 0, ccw flank 1, cw flank 2."""
    perm = {m: 0, ccw: 1, cw: 2}
    mat = s.as_matrix()
    sig = np.zeros((3, 3))
    for a in range(3):
        for b in range(3):
            if a != b:
                sig[perm[a], perm[b]] = mat[a, b]
    return SurfaceTensions(sigma01=sig[0, 1], sigma02=sig[0, 2], sigma12=sig[1, 2])


def _good_triangle_competitor(
    c: ConeConfig, s: SurfaceTensions, k: int, disk_radius: float
) -> tuple[PolyConfig, float]:
    """Replace sector k's tip by the good-triangle partition.

    Returns the competitor configuration and the (negative) energy delta
    relative to the straight cone on the same disk.
    """
    n = len(c.sectors)
    sector = c.sectors[k]
    m = sector.label
    cw = c.labels[(k - 1) % n]
    ccw = c.labels[(k + 1) % n]
    role = _role_tensions(s, m, ccw, cw)
    tri = construct_good_triangle(role, sector.opening, orientation=sector.start)
    w = FermatWeights.from_tensions(role)
    verts = np.array([tri.p0, tri.p1, tri.p2])
    scale = 0.45 * disk_radius / max(1.0, np.hypot(*tri.p1), np.hypot(*tri.p2))
    delta = scale * (fermat_cost(tri.tilde_p, verts, w) - fermat_cost(tri.p0, verts, w))

    p1 = scale * tri.p1
    p2 = scale * tri.p2
    tp = scale * tri.tilde_p
    origin = np.zeros(2)

    def pair(a, b):
        return (min(a, b), max(a, b))

    a0, a1 = sector.start, sector.end
    ifaces = []
    for angle, la, lb in c.rays():
        pr = pair(la, lb)
        if abs(angle - a0) <= 1e-12 or abs(angle - a0 - _TWO_PI) <= 1e-12:
            ifaces.append(Interface(pair=pr, points=np.array([p1, disk_radius * _unit(angle)])))
        elif abs(angle - a1) <= 1e-12:
            ifaces.append(Interface(pair=pr, points=np.array([p2, disk_radius * _unit(angle)])))
        else:
            ifaces.append(Interface(pair=pr, points=np.array([origin, disk_radius * _unit(angle)])))
    # Internal edges of the triangle partition: tilde joins the origin and
    # both triangle feet; labels follow the sub-triangle fluids.
    ifaces.append(Interface(pair=pair(cw, ccw), points=np.array([origin, tp])))
    ifaces.append(Interface(pair=pair(m, cw), points=np.array([tp, p1])))
    ifaces.append(Interface(pair=pair(m, ccw), points=np.array([tp, p2])))
    competitor = PolyConfig(
        domain_radius=disk_radius, tensions=s, interfaces=tuple(ifaces), regions=None
    )
    return competitor, delta


def classify_cone(
    c: ConeConfig,
    s: SurfaceTensions,
    disk_radius: float = 1.0,
    angle_tol: float = 1e-9,
) -> ImprovementReport:
    """Classify a cone: minimal candidate or improvable, with a competitor.

    Order of checks: the two-fluid fill-in; then, for cones surviving it,
    the good-triangle replacement in the sector with the largest Neumann
    deficit.  Cones with more than three sectors and no flanked sector
    are 3-periodic in the labels, so their openings cannot all meet the
    Neumann angles and a deficit sector always exists.  A straight line
    (two sectors) and the exact-Neumann three-sector junction are the
    non-improvable outcomes.
    """
    fill = detect_fill_in(c, s, disk_radius=disk_radius)
    if fill.improvable:
        return fill

    ang = neumann_angles(s)
    n = len(c.sectors)
    if n <= 2:
        return ImprovementReport(
            improvable=False,
            mechanism=None,
            energy_delta=0.0,
            competitor=None,
            disk_radius=disk_radius,
        )

    deficits = [
        (ang.opening_of_fluid(sec.label) - sec.opening, k)
        for k, sec in enumerate(c.sectors)
    ]
    if n == 3:
        worst = max(abs(d) for d, _ in deficits)
        if worst <= angle_tol:
            return ImprovementReport(
                improvable=False,
                mechanism=None,
                energy_delta=0.0,
                competitor=None,
                disk_radius=disk_radius,
            )
    deficit, k = max(deficits)
    competitor, delta = _good_triangle_competitor(c, s, k, disk_radius)
    return ImprovementReport(
        improvable=True,
        mechanism=Mechanism.GOOD_TRIANGLE_REPLACEMENT,
        energy_delta=delta,
        competitor=competitor,
        disk_radius=disk_radius,
        sector_index=k,
    )


@dataclass(frozen=True)
class RectanglePatch:
    """One volume-restoring rectangle hugging a boundary ray.

    The rectangle spans radii [R/2, R] along ray `ray_index`, has width
    `width` into the donor sector, and repaints that strip with the
    receiving fluid.
    """

    ray_index: int
    angle: float
    donor_sector: int
    from_fluid: int
    to_fluid: int
    width: float
    length: float
    corners: np.ndarray
    cost: float


def rectangle_volume_fix(
    c: ConeConfig, deltaV, R: float, s: SurfaceTensions
) -> tuple[tuple[RectanglePatch, ...], float]:
    """Restore per-fluid volumes by thin rectangles along the rays.

    deltaV[j] is the volume fluid j must gain.  Transfers are assigned to
    rays by a minimum-norm solve of the fluid-incidence system, then each
    transfer t becomes a rectangle of length R/2 and width |t|/(R/2) on
    the donor side of its ray.  Returns the patches and the cost bound
    sum(2 * width * max sigma); the exact added interface length of each
    patch is 2 * width, priced at the ray's own tension in patch.cost.
    """
    dV = np.asarray(deltaV, dtype=float)
    if dV.shape != (3,):
        raise ValueError("deltaV must give one correction per fluid")
    scale = max(float(np.max(np.abs(dV))), 1e-300)
    if abs(float(dV.sum())) > 1e-9 * scale:
        raise ValueError("volume corrections must sum to zero")
    if not (R > 0.0):
        raise ValueError("disk radius must be positive")
    rays = c.rays()
    if not np.any(dV != 0.0):
        return (), 0.0
    if not rays:
        raise ValueError("a single-sector cone admits no volume transfer")

    A = np.zeros((3, len(rays)))
    for idx, (_, la, lb) in enumerate(rays):
        A[la, idx] += 1.0
        A[lb, idx] -= 1.0
    t, *_ = np.linalg.lstsq(A, dV, rcond=None)
    if np.linalg.norm(A @ t - dV) > 1e-9 * scale:
        raise ValueError("volume corrections are infeasible for the fluids present")

    half = 0.5 * R
    patches = []
    bound = 0.0
    n = len(c.sectors)
    for idx, (angle, la, lb) in enumerate(rays):
        tk = float(t[idx])
        if tk == 0.0:
            continue
        # tk > 0 moves volume from sector idx+1's fluid (lb) into la, so the
        # rectangle is carved out of sector idx+1; tk < 0 mirrors this.
        if tk > 0.0:
            donor_sector, from_fluid, to_fluid, side = (idx + 1) % n, lb, la, +1.0
        else:
            donor_sector, from_fluid, to_fluid, side = idx, la, lb, -1.0
        w = abs(tk) / half
        op = c.sectors[donor_sector].opening
        clearance = half * math.sin(min(op, 0.5 * math.pi))
        if w >= clearance:
            raise DiskTooSmall(
                f"ray {idx} needs width {w:.6g} but sector {donor_sector} only clears {clearance:.6g}; increase R"
            )
        u = _unit(angle)
        nrm = side * np.array([-u[1], u[0]])
        corners = np.array([half * u, R * u, R * u + w * nrm, half * u + w * nrm])
        sigma = s.pair(min(la, lb), max(la, lb))
        patches.append(
            RectanglePatch(
                ray_index=idx,
                angle=angle,
                donor_sector=donor_sector,
                from_fluid=from_fluid,
                to_fluid=to_fluid,
                width=w,
                length=half,
                corners=corners,
                cost=2.0 * w * sigma,
            )
        )
        bound += 2.0 * w * s.max_sigma
    return tuple(patches), bound

"""Exact polygonal three-fluid configurations on a disk domain.

Interfaces are polylines tagged with their fluid pair (i, j), i < j, and
weighted by the pair tension carried on the configuration itself.  The
orientation convention is that fluid i lies to the left of travel along
the point order, so the unit normal (right of travel) points from region
i into region j; every integral evaluated here depends on the normal
only through even powers, so the convention is documentation rather than
a correctness requirement.

Region interiors are optional.  When supplied (one tuple of boundary
loops per fluid, each loop mixing straight edges and counter-clockwise
arcs of the domain circle) they enable the wetting and gravity terms,
which need boundary arc lengths and first moments; everything else works
from the interfaces alone.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    QuadratureFailure,
    adaptive_simpson,
    seg_length,
    segment_ball_interval,
    segment_circle_params,
    unit_normal,
)
from .tensions import SurfaceTensions

SEGMENT = 0
ARC = 1

_VALID_PAIRS = {(0, 1), (0, 2), (1, 2)}


class NotStationary(ValueError):
    """Configuration fails the first-variation stationarity battery."""


class TangentialCrossing(ValueError):
    """An interface meets the projection circle tangentially."""


@dataclass(frozen=True)
class Interface:
    """One weighted polyline: fluid `pair[0]` left of travel, `pair[1]` right."""

    pair: tuple[int, int]
    points: np.ndarray

    def __post_init__(self):
        pair = (int(self.pair[0]), int(self.pair[1]))
        if pair not in _VALID_PAIRS:
            raise ValueError(f"interface pair must be ordered among fluids 0..2, got {self.pair}")
        object.__setattr__(self, "pair", pair)
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise ValueError("interface needs at least two plane points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("interface points must be finite")
        steps = np.hypot(*(pts[1:] - pts[:-1]).T)
        if np.any(steps == 0.0):
            raise ValueError("interface has a zero-length segment")
        object.__setattr__(self, "points", pts)

    def segments(self):
        pts = self.points
        for k in range(len(pts) - 1):
            yield pts[k], pts[k + 1]


@dataclass(frozen=True)
class RegionLoop:
    """Closed boundary loop; edge k joins vertex k to vertex (k+1) mod m.

    Edge kinds: SEGMENT for a straight edge, ARC for the counter-clockwise
    arc of the domain circle between the two vertices (both must lie on
    the circle).  A single-vertex loop with one ARC edge is the full
    circle.  Loops are traversed with the region on the left, so holes
    are clockwise polygon loops.
    """

    vertices: np.ndarray
    kinds: tuple[int, ...]

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 1:
            raise ValueError("loop needs at least one vertex")
        kinds = tuple(int(k) for k in self.kinds)
        if len(kinds) != v.shape[0]:
            raise ValueError("loop needs one edge kind per vertex")
        if any(k not in (SEGMENT, ARC) for k in kinds):
            raise ValueError("edge kinds must be SEGMENT or ARC")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "kinds", kinds)

    def edges(self):
        v = self.vertices
        m = len(v)
        for k in range(m):
            yield self.kinds[k], v[k], v[(k + 1) % m]


@dataclass(frozen=True)
class TestField:
    """Radial vector field T(x) = phi(|x - center| / radius) * (x - center).

    The default profile is the C^1 cubic step: 1 up to u = 1/2, then
    1 - v^2(3 - 2v) with v = 2u - 1, reaching 0 at u = 1; its derivative
    is nonpositive.  A custom profile must come with its derivative.
    """

    __test__ = False  # bare "Test" prefix; not a test-runner fixture

    center: np.ndarray
    radius: float
    profile: object = None
    profile_derivative: object = None

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float)
        if c.shape != (2,) or not np.all(np.isfinite(c)):
            raise ValueError("field center must be a finite plane point")
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise ValueError("field radius must be positive")
        if (self.profile is None) != (self.profile_derivative is None):
            raise ValueError("custom profiles need both phi and its derivative")
        object.__setattr__(self, "center", c)

    def phi(self, u: float) -> float:
        if self.profile is not None:
            return float(self.profile(u))
        if u <= 0.5:
            return 1.0
        if u >= 1.0:
            return 0.0
        v = 2.0 * u - 1.0
        return 1.0 - v * v * (3.0 - 2.0 * v)

    def dphi(self, u: float) -> float:
        if self.profile_derivative is not None:
            return float(self.profile_derivative(u))
        if u <= 0.5 or u >= 1.0:
            return 0.0
        v = 2.0 * u - 1.0
        return -12.0 * v * (1.0 - v)


@dataclass(frozen=True)
class PolyConfig:
    """Disk-domain configuration: tensions + interfaces (+ optional regions)."""

    domain_radius: float
    tensions: SurfaceTensions
    interfaces: tuple[Interface, ...]
    regions: tuple[tuple[RegionLoop, ...], ...] | None = None

    def __post_init__(self):
        if not (math.isfinite(self.domain_radius) and self.domain_radius > 0.0):
            raise ValueError("domain radius must be positive")
        ifaces = tuple(self.interfaces)
        object.__setattr__(self, "interfaces", ifaces)
        lim = self.domain_radius * (1.0 + 1e-9)
        for iface in ifaces:
            if np.any(np.hypot(*iface.points.T) > lim):
                raise ValueError("interface points must lie within the domain disk")
        if self.regions is not None:
            regions = tuple(tuple(loops) for loops in self.regions)
            if len(regions) != 3:
                raise ValueError("regions must give one loop tuple per fluid")
            object.__setattr__(self, "regions", regions)
            total = sum(
                _loop_area(loop, self.domain_radius)
                for loops in regions
                for loop in loops
            )
            disk = math.pi * self.domain_radius**2
            if abs(total - disk) > 1e-9 * max(disk, 1.0):
                raise ValueError(
                    f"region areas sum to {total:.12g}, expected the disk area {disk:.12g}"
                )

    def weight(self, pair) -> float:
        return self.tensions.pair(pair[0], pair[1])


@dataclass(frozen=True)
class PolyEnergyBreakdown:
    surface: float
    wetting: float
    gravity: float
    total: float


@dataclass(frozen=True)
class WeakMonotonicityTerms:
    lhs: float
    rhs: float
    scaled_inner: float
    scaled_outer: float
    fourth_power: float
    correction_inner: float
    correction_outer: float


@dataclass(frozen=True)
class MonotonicityTrace:
    """Per-radius monotonicity quantities; fourth_power is accumulated
    from the first radius outward."""

    radii: np.ndarray
    scaled_energy: np.ndarray
    gamma: np.ndarray
    fourth_power: np.ndarray
    correction: np.ndarray

    def __post_init__(self):
        n = len(self.radii)
        for name in ("scaled_energy", "gamma", "fourth_power", "correction"):
            if len(getattr(self, name)) != n:
                raise ValueError("trace columns must share a length")
        if n and (np.any(np.diff(self.radii) <= 0.0) or self.radii[0] <= 0.0):
            raise ValueError("radii must be strictly increasing and positive")


def _parse_ball(c: PolyConfig, ball):
    """Normalize a ball argument: None (whole domain), radius, or (center, radius)."""
    if ball is None:
        return np.zeros(2), c.domain_radius
    if np.isscalar(ball):
        center, radius = np.zeros(2), float(ball)
    else:
        center, radius = np.asarray(ball[0], dtype=float), float(ball[1])
    if radius <= 0.0:
        raise ValueError("ball radius must be positive")
    if np.hypot(*center) + radius > c.domain_radius * (1.0 + 1e-9):
        raise ValueError("ball must lie within the domain")
    return center, radius


def energy_FS(c: PolyConfig, ball=None) -> float:
    """Surface energy: sum of sigma_ij * interface length inside the ball."""
    center, radius = _parse_ball(c, ball)
    total = 0.0
    for iface in c.interfaces:
        sigma = c.weight(iface.pair)
        length = 0.0
        for p, q in iface.segments():
            sub = segment_ball_interval(p, q, radius, center)
            if sub is not None:
                length += (sub[1] - sub[0]) * seg_length(p, q)
        total += sigma * length
    return total


def _arc_span(a: np.ndarray, b: np.ndarray, R: float) -> tuple[float, float]:
    """Angles (theta_a, theta_b) of a counter-clockwise circle arc a -> b."""
    for pt in (a, b):
        if abs(np.hypot(*pt) - R) > 1e-9 * R:
            raise ValueError("arc endpoints must lie on the domain circle")
    ta = math.atan2(a[1], a[0])
    tb = math.atan2(b[1], b[0])
    if np.allclose(a, b):
        return ta, ta + 2.0 * math.pi
    while tb <= ta:
        tb += 2.0 * math.pi
    return ta, tb


def _loop_area(loop: RegionLoop, R: float) -> float:
    """Signed area by the Green integral of x dy."""
    total = 0.0
    for kind, a, b in loop.edges():
        if kind == SEGMENT:
            total += 0.5 * (a[0] + b[0]) * (b[1] - a[1])
        else:
            ta, tb = _arc_span(a, b, R)
            total += R * R * 0.5 * ((tb - ta) + (math.sin(tb) * math.cos(tb) - math.sin(ta) * math.cos(ta)))
    return total


def _loop_y_moment(loop: RegionLoop, R: float) -> float:
    """Integral of y over the loop interior, via -(1/2) y^2 dx."""
    total = 0.0
    for kind, a, b in loop.edges():
        if kind == SEGMENT:
            total += -(b[0] - a[0]) * (a[1] * a[1] + a[1] * b[1] + b[1] * b[1]) / 6.0
        else:
            ta, tb = _arc_span(a, b, R)
            anti = lambda t: -math.cos(t) + math.cos(t) ** 3 / 3.0
            total += 0.5 * R**3 * (anti(tb) - anti(ta))
    return total


def _loop_arc_length(loop: RegionLoop, R: float) -> float:
    total = 0.0
    for kind, a, b in loop.edges():
        if kind == ARC:
            ta, tb = _arc_span(a, b, R)
            total += R * (tb - ta)
    return total


def energy_FSWP(c: PolyConfig, params) -> PolyEnergyBreakdown:
    """Full energy: surface + wetting + gravity over the whole domain.

    Wetting and gravity need region loops; requesting them (nonzero
    betas, or nonzero g with nonzero densities) without regions raises.
    """
    surface = energy_FS(c, None)
    betas = tuple(params.betas)
    need_wetting = any(b != 0.0 for b in betas)
    need_gravity = params.g != 0.0 and any(r != 0.0 for r in params.rhos)
    wetting = 0.0
    gravity = 0.0
    if need_wetting or need_gravity:
        if c.regions is None:
            raise ValueError(
                "wetting/gravity terms need region loops; this configuration has none"
            )
        R = c.domain_radius
        for j in range(3):
            arc_len = sum(_loop_arc_length(loop, R) for loop in c.regions[j])
            y_moment = sum(_loop_y_moment(loop, R) for loop in c.regions[j])
            wetting += betas[j] * arc_len
            gravity += params.rhos[j] * params.g * y_moment
    return PolyEnergyBreakdown(
        surface=surface,
        wetting=wetting,
        gravity=gravity,
        total=surface + wetting + gravity,
    )


def _segment_offset(p: np.ndarray, q: np.ndarray) -> float:
    """Signed distance of the segment's line from the origin (nu . x)."""
    return float(np.dot(unit_normal(p, q), p))


def gamma_deviation(c: PolyConfig, r: float, tol: float = 1e-10) -> float:
    """The weighted normal-moment integral over the interfaces in B_r.

    Per straight segment nu.x is the constant line offset d, so the
    integrand is d^2 / |x|^3; radial segments contribute exactly zero and
    are skipped analytically.
    """
    _, radius = _parse_ball(c, r)
    total = 0.0
    for iface in c.interfaces:
        sigma = c.weight(iface.pair)
        acc = 0.0
        for p, q in iface.segments():
            sub = segment_ball_interval(p, q, radius)
            if sub is None:
                continue
            d = _segment_offset(p, q)
            scale = max(np.hypot(*p), np.hypot(*q))
            if abs(d) <= 1e-12 * scale:
                continue
            L = seg_length(p, q)
            dd = d * d

            def f(s, p=p, dirv=(q - p) / L, dd=dd):
                x = p + s * dirv
                return dd / np.hypot(x[0], x[1]) ** 3

            acc += adaptive_simpson(f, sub[0] * L, sub[1] * L, tol=tol)
        total += sigma * acc
    return total


def fourth_power_integral(
    c: PolyConfig, rho: float, r: float, tol: float = 1e-10
) -> float:
    """Sum of (sigma_ij / 8) * integral over B_r \\ B_rho of (nu.x)^4 / |x|^5."""
    if not (0.0 < rho < r):
        raise ValueError("need 0 < rho < r")
    _, radius = _parse_ball(c, r)
    total = 0.0
    for iface in c.interfaces:
        sigma = c.weight(iface.pair)
        acc = 0.0
        for p, q in iface.segments():
            outer = segment_ball_interval(p, q, radius)
            if outer is None:
                continue
            inner = segment_ball_interval(p, q, rho)
            pieces = []
            if inner is None:
                pieces.append(outer)
            else:
                if outer[0] < inner[0]:
                    pieces.append((outer[0], inner[0]))
                if inner[1] < outer[1]:
                    pieces.append((inner[1], outer[1]))
            d = _segment_offset(p, q)
            scale = max(np.hypot(*p), np.hypot(*q))
            if abs(d) <= 1e-12 * scale:
                continue
            L = seg_length(p, q)
            d4 = d**4

            def f(s, p=p, dirv=(q - p) / L, d4=d4):
                x = p + s * dirv
                return d4 / np.hypot(x[0], x[1]) ** 5

            for t0, t1 in pieces:
                if t1 > t0:
                    acc += adaptive_simpson(f, t0 * L, t1 * L, tol=tol)
        total += sigma / 8.0 * acc
    return total


def weak_monotonicity_terms(
    c: PolyConfig, rho: float, r: float, C: float = 0.0, tol: float = 1e-10
) -> WeakMonotonicityTerms:
    """Both sides of the weak monotonicity inequality (lhs <= rhs)."""
    if not (0.0 < rho < r <= c.domain_radius * (1.0 + 1e-9)):
        raise ValueError("need 0 < rho < r <= domain radius")
    scaled_inner = energy_FS(c, rho) / rho
    scaled_outer = energy_FS(c, r) / r
    fourth = fourth_power_integral(c, rho, r, tol=tol)
    corr_inner = C * rho * rho
    corr_outer = C * r * r
    return WeakMonotonicityTerms(
        lhs=scaled_inner + corr_inner + fourth,
        rhs=scaled_outer + corr_outer,
        scaled_inner=scaled_inner,
        scaled_outer=scaled_outer,
        fourth_power=fourth,
        correction_inner=corr_inner,
        correction_outer=corr_outer,
    )


def first_variation_residual(
    c: PolyConfig, T: TestField, s: SurfaceTensions | None = None, tol: float = 1e-12
) -> float:
    """Weighted first variation of interface length along the test field.

    Integrates div_E T = phi(u) + u phi'(u) (1 - (y.nu)^2/|y|^2) per
    segment (y = x - center, u = |y|/radius), splitting each segment at
    the profile breakpoints u = 1/2 and u = 1.  Near zero certifies
    stationarity against T.
    """
    s = s if s is not None else c.tensions
    center, radius = np.asarray(T.center, dtype=float), float(T.radius)
    if np.hypot(*center) + radius > c.domain_radius * (1.0 + 1e-12):
        raise ValueError("test field support must be compactly inside the domain")
    total = 0.0
    for iface in c.interfaces:
        sigma = s.pair(*iface.pair)
        acc = 0.0
        for p, q in iface.segments():
            L = seg_length(p, q)
            nu = unit_normal(p, q)
            dn = float(np.dot(p - center, nu))
            cuts = [0.0, 1.0]
            cuts += segment_circle_params(p, q, 0.5 * radius, center)
            cuts += segment_circle_params(p, q, radius, center)
            cuts = sorted(cuts)

            def f(arc, p=p, dirv=(q - p) / L, dn=dn):
                y = p + arc * dirv - center
                ay = np.hypot(y[0], y[1])
                u = ay / radius
                if u >= 1.0:
                    return 0.0
                proj = 0.0 if ay == 0.0 else (dn * dn) / (ay * ay)
                return T.phi(u) + u * T.dphi(u) * (1.0 - proj)

            for t0, t1 in zip(cuts[:-1], cuts[1:]):
                if t1 <= t0:
                    continue
                mid = p + 0.5 * (t0 + t1) * (q - p) - center
                if np.hypot(*mid) >= radius:
                    continue
                acc += adaptive_simpson(f, t0 * L, t1 * L, tol=tol)
        total += sigma * acc
    return total


def stationarity_battery(c: PolyConfig, s: SurfaceTensions | None = None) -> float:
    """Max |first variation| over the standard field battery.

    Fields: radial profiles centered at the origin and at 7 points on the
    0.45 R ring, with radii (0.2, 0.35, 0.5) R; all supports sit strictly
    inside the domain.
    """
    R = c.domain_radius
    centers = [np.zeros(2)]
    for k in range(7):
        a = 2.0 * math.pi * k / 7.0
        centers.append(0.45 * R * np.array([math.cos(a), math.sin(a)]))
    worst = 0.0
    for center in centers:
        for rr in (0.2 * R, 0.35 * R, 0.5 * R):
            res = first_variation_residual(c, TestField(center=center, radius=rr), s)
            worst = max(worst, abs(res))
    return worst


def sharp_monotonicity_check(
    c: PolyConfig,
    radii,
    fd_step_rel: float = 1e-4,
    gamma_tol: float = 1e-13,
    stationarity_tol: float = 1e-6,
    check_stationarity: bool = True,
) -> np.ndarray:
    """|d/dr (r^{-1} F_S(B_r)) - dgamma/dr| by central differences.

    The identity is asserted for stationary configurations only, so a
    field battery gates the evaluation (NotStationary on failure).  The
    gamma evaluations run at a tighter quadrature tolerance than usual
    because finite differencing divides the quadrature noise by 2h.
    """
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if check_stationarity:
        worst = stationarity_battery(c)
        if worst > stationarity_tol:
            raise NotStationary(
                f"stationarity battery residual {worst:.3g} exceeds {stationarity_tol:.3g}"
            )
    out = np.empty(len(radii))
    for k, r in enumerate(radii):
        h = fd_step_rel * r
        if r - h <= 0.0 or r + h > c.domain_radius * (1.0 + 1e-12):
            raise ValueError(f"radius {r} leaves no room for the finite-difference step")
        sc_hi = energy_FS(c, r + h) / (r + h)
        sc_lo = energy_FS(c, r - h) / (r - h)
        gm_hi = gamma_deviation(c, r + h, tol=gamma_tol)
        gm_lo = gamma_deviation(c, r - h, tol=gamma_tol)
        out[k] = abs((sc_hi - sc_lo) / (2.0 * h) - (gm_hi - gm_lo) / (2.0 * h))
    return out


def compute_monotonicity_trace(
    c: PolyConfig, radii, C: float = 0.0, tol: float = 1e-10
) -> MonotonicityTrace:
    """Sample the monotonicity quantities on an increasing radius list."""
    radii = np.asarray(radii, dtype=float)
    scaled = np.array([energy_FS(c, r) / r for r in radii])
    gamma = np.array([gamma_deviation(c, r, tol=tol) for r in radii])
    fourth = np.zeros(len(radii))
    for k in range(1, len(radii)):
        fourth[k] = fourth[k - 1] + fourth_power_integral(
            c, radii[k - 1], radii[k], tol=tol
        )
    correction = C * radii**2
    return MonotonicityTrace(
        radii=radii,
        scaled_energy=scaled,
        gamma=gamma,
        fourth_power=fourth,
        correction=correction,
    )


# ---------------------------------------------------------------------------
# Conical projection


def _project_polyline(points: np.ndarray, t: float, tol: float):
    """Split one polyline at the circle |x| = t, keeping the outside runs.

    Returns a list of (point-array, attach_start, attach_end); attach
    flags mark run endpoints sitting on the circle, where the cone
    construction adds a radial segment to the origin.
    """
    pts = points.copy()
    radii = np.hypot(pts[:, 0], pts[:, 1])
    on = np.abs(radii - t) <= tol * t
    for i in np.nonzero(on)[0]:
        pts[i] *= t / radii[i]
        radii[i] = t

    # Tangency guards: a segment whose closest approach to the origin is
    # within tol of the circle, attained strictly inside the segment, has
    # no transversal crossing there.
    n = len(pts)
    for k in range(n - 1):
        p, q = pts[k], pts[k + 1]
        d = q - p
        denom = float(np.dot(d, d))
        s_star = -float(np.dot(p, d)) / denom
        if 1e-9 < s_star < 1.0 - 1e-9:
            r_star = float(np.hypot(*(p + s_star * d)))
            if abs(r_star - t) <= tol * t and not (radii[k] == t or radii[k + 1] == t):
                raise TangentialCrossing(
                    f"segment {k} grazes the circle of radius {t:.6g}"
                )
    for i in range(1, n - 1):
        if on[i] and ((radii[i - 1] > t) == (radii[i + 1] > t)) and radii[i - 1] != t and radii[i + 1] != t:
            raise TangentialCrossing(f"vertex {i} touches the circle of radius {t:.6g}")

    # Refined vertex list with crossing points inserted.  A crossing
    # parameter next to an endpoint that already sits on the circle is
    # that endpoint seen through round-off, not a second crossing.
    refined = [(pts[0], radii[0] == t)]
    for k in range(n - 1):
        p, q = pts[k], pts[k + 1]
        for s in sorted(segment_circle_params(p, q, t)):
            if radii[k] == t and s < 1e-9:
                continue
            if radii[k + 1] == t and s > 1.0 - 1e-9:
                continue
            x = p + s * (q - p)
            x *= t / np.hypot(*x)
            refined.append((x, True))
        refined.append((q, radii[k + 1] == t))

    # Split into runs at boundary points; boundary points belong to both
    # neighboring runs.
    runs = []
    current = [refined[0]]
    for item in refined[1:]:
        current.append(item)
        if item[1]:
            runs.append(current)
            current = [item]
    if len(current) > 1:
        runs.append(current)

    pieces = []
    for run in runs:
        rpts = np.array([it[0] for it in run])
        keep = np.ones(len(rpts), dtype=bool)
        for i in range(1, len(rpts)):
            prev = np.flatnonzero(keep[:i])[-1]
            if np.hypot(*(rpts[i] - rpts[prev])) <= 1e-12 * max(t, 1.0):
                keep[i] = False
        rpts = rpts[keep]
        if len(rpts) < 2:
            continue
        mids = 0.5 * (rpts[:-1] + rpts[1:])
        outside = bool(np.all(np.hypot(mids[:, 0], mids[:, 1]) >= t))
        if not outside:
            continue
        pieces.append((rpts, run[0][1], run[-1][1]))
    return pieces


def conical_projection(c: PolyConfig, t: float, tol: float = 1e-12) -> PolyConfig:
    """Replace everything inside B_t by the cone over the trace on its circle.

    Interfaces keep their outside parts; each transversal crossing point
    spawns a radial segment to the origin.  The interior energy of the
    result is exactly t times the sum of crossing tensions.  Requires
    transversal crossings (TangentialCrossing otherwise).
    """
    if not (0.0 < t < c.domain_radius):
        raise ValueError("projection radius must satisfy 0 < t < domain radius")
    origin = np.zeros(2)
    new_interfaces = []
    for iface in c.interfaces:
        for rpts, att_start, att_end in _project_polyline(iface.points, t, tol):
            parts = [rpts]
            if att_start:
                parts.insert(0, origin[None, :])
            if att_end:
                parts.append(origin[None, :])
            new_interfaces.append(Interface(pair=iface.pair, points=np.vstack(parts)))
    return PolyConfig(
        domain_radius=c.domain_radius,
        tensions=c.tensions,
        interfaces=tuple(new_interfaces),
        regions=None,
    )


# ---------------------------------------------------------------------------
# Builders and serialization


def make_chord_config(
    tensions: SurfaceTensions,
    d: float,
    R: float = 1.0,
    pair: tuple[int, int] = (0, 1),
    with_regions: bool = True,
) -> PolyConfig:
    """Horizontal chord at height y = d; fluid pair[0] above, pair[1] below."""
    if not (0.0 <= d < R):
        raise ValueError("chord offset must satisfy 0 <= d < R")
    xr = math.sqrt(R * R - d * d)
    a = np.array([xr, d])  # right endpoint
    b = np.array([-xr, d])  # left endpoint
    # Travel b -> a keeps the upper fluid (pair[0]) on the left.
    iface = Interface(pair=pair, points=np.array([b, a]))
    regions = None
    if with_regions:
        upper = RegionLoop(vertices=np.array([b, a]), kinds=(SEGMENT, ARC))
        lower = RegionLoop(vertices=np.array([a, b]), kinds=(SEGMENT, ARC))
        loops = [(), (), ()]
        loops[pair[0]] = (upper,)
        loops[pair[1]] = (lower,)
        regions = tuple(loops)
    return PolyConfig(
        domain_radius=R, tensions=tensions, interfaces=(iface,), regions=regions
    )


def config_to_json(c: PolyConfig) -> str:
    """Serialize geometry (not tensions or regions) as JSON."""
    payload = {
        "domain_radius": c.domain_radius,
        "interfaces": [
            {"pair": list(iface.pair), "points": iface.points.tolist()}
            for iface in c.interfaces
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def config_from_json(text: str, tensions: SurfaceTensions) -> PolyConfig:
    """Load geometry from JSON; tensions are supplied separately."""
    payload = json.loads(text)
    ifaces = tuple(
        Interface(pair=tuple(item["pair"]), points=np.asarray(item["points"], dtype=float))
        for item in payload["interfaces"]
    )
    return PolyConfig(
        domain_radius=float(payload["domain_radius"]),
        tensions=tensions,
        interfaces=ifaces,
        regions=None,
    )

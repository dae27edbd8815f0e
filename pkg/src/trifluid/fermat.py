"""Weighted Fermat point of a triangle and the good-triangle construction.

The junction cost against fixed anchor points P0, P1, P2 is

    cost(p) = sum_j zeta_j * |p - P_j|.

For a three-fluid junction each anchor ray is the interface between the
two fluids other than j, so the natural weights are zeta0 = sigma12,
zeta1 = sigma02, zeta2 = sigma01.  The cost is convex, smooth away from
the anchors, and its Hessian is positive definite off the anchors for a
non-degenerate triangle, so a damped Newton iteration from the centroid
converges quadratically whenever the minimum is interior.  When instead
some vertex absorbs the pull of the other two (|sum of their unit pulls|
weighted <= own weight) the minimum sits at that vertex and the solver
reports it rather than returning a spurious interior point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tensions import NeumannAngles, SurfaceTensions, neumann_angles

VERTEX_RTOL = 1e-14
# Iterates closer to a vertex than this (relative to the diameter) are
# classified as a vertex minimum; the cost is not differentiable there.
NEAR_VERTEX_RTOL = 1e-10
ARMIJO_C = 1e-4


class VertexSingularity(ValueError):
    """Derivative requested at (numerically) an anchor vertex."""


class NoInteriorMinimum(ValueError):
    """The weighted Fermat minimum sits at a vertex, not in the interior."""

    def __init__(self, vertex: int, message: str | None = None):
        self.vertex = vertex
        super().__init__(message or f"minimum at vertex {vertex}")


class NonConvergence(RuntimeError):
    """Newton iteration failed to reach the requested tolerance."""


class OpeningTooWide(ValueError):
    """Requested sector opening is not strictly below gamma12."""


@dataclass(frozen=True)
class FermatWeights:
    """Positive anchor weights zeta_j.

    The junction interpretation pairs zeta0 = sigma12, zeta1 = sigma02,
    zeta2 = sigma01 (each anchor ray carries the tension of the interface
    it represents); use from_tensions for that mapping.  Positivity is
    required; triangularity of the underlying tensions is not enforced
    here, since non-triangular weights are exactly the ones that produce
    vertex minima.
    """

    zeta0: float
    zeta1: float
    zeta2: float

    def __post_init__(self):
        for name in ("zeta0", "zeta1", "zeta2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be finite and positive, got {v!r}")

    @classmethod
    def from_tensions(cls, s: SurfaceTensions) -> "FermatWeights":
        return cls(zeta0=s.sigma12, zeta1=s.sigma02, zeta2=s.sigma01)

    def as_array(self) -> np.ndarray:
        return np.array([self.zeta0, self.zeta1, self.zeta2])


@dataclass(frozen=True)
class FermatSolution:
    point: np.ndarray
    cost: float
    gradient_norm: float
    iterations: int
    hessian_min_eigenvalue: float


@dataclass(frozen=True)
class GoodTriangle:
    """Counter-clockwise triangle with an interior junction point.

    tilde_p is the junction realizing all three Neumann openings toward
    the vertices: the wedge from the tilde_p->p0 ray to the tilde_p->p1
    ray opens gamma01, and so on cyclically.
    """

    p0: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    tilde_p: np.ndarray

    def __post_init__(self):
        v = self.vertices()
        area2 = _cross(v[1] - v[0], v[2] - v[0])
        if area2 <= 0.0:
            raise ValueError("good triangle vertices must be counter-clockwise")
        if not _point_in_triangle(np.asarray(self.tilde_p, dtype=float), v, strict=True):
            raise ValueError("tilde_p must lie strictly inside the triangle")

    def vertices(self) -> np.ndarray:
        return np.array([self.p0, self.p1, self.p2], dtype=float)


def _cross(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def _as_vertices(vertices) -> np.ndarray:
    v = np.asarray(vertices, dtype=float)
    if v.shape != (3, 2):
        raise ValueError(f"vertices must be three plane points, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vertices must be finite")
    return v


def _diameter(v: np.ndarray) -> float:
    return max(
        float(np.hypot(*(v[i] - v[j])))
        for i in range(3)
        for j in range(i + 1, 3)
    )


def _check_nondegenerate(v: np.ndarray) -> float:
    diam = _diameter(v)
    area2 = abs(_cross(v[1] - v[0], v[2] - v[0]))
    if diam <= 0.0 or area2 <= 1e-12 * diam * diam:
        raise ValueError("vertices are (numerically) collinear")
    return diam


def _point_in_triangle(p: np.ndarray, v: np.ndarray, strict: bool = False) -> bool:
    d = _diameter(v)
    margin = (1e-12 if strict else -1e-9) * d * d
    for k in range(3):
        a, b = v[k], v[(k + 1) % 3]
        if _cross(b - a, p - a) < margin:
            return False
    return True


def fermat_cost(p, vertices, w: FermatWeights) -> float:
    """Weighted anchor-distance sum; defined (and convex) everywhere."""
    v = _as_vertices(vertices)
    p = np.asarray(p, dtype=float)
    d = np.hypot(v[:, 0] - p[0], v[:, 1] - p[1])
    return float(np.dot(w.as_array(), d))


def _offsets(p: np.ndarray, v: np.ndarray):
    """X_j, Y_j, beta_j arrays; raises at (numerically) a vertex."""
    x = p[0] - v[:, 0]
    y = p[1] - v[:, 1]
    beta = np.hypot(x, y)
    if np.min(beta) < VERTEX_RTOL * _diameter(v):
        raise VertexSingularity(
            f"point {p.tolist()} coincides with vertex {int(np.argmin(beta))}"
        )
    return x, y, beta


def fermat_gradient(p, vertices, w: FermatWeights) -> np.ndarray:
    v = _as_vertices(vertices)
    p = np.asarray(p, dtype=float)
    x, y, beta = _offsets(p, v)
    wb = w.as_array() / beta
    return np.array([float(np.dot(wb, x)), float(np.dot(wb, y))])


def fermat_hessian(p, vertices, w: FermatWeights) -> np.ndarray:
    """Hessian of the cost; positive definite off the vertices.

    Each anchor contributes zeta_j/beta_j^3 times the projector onto the
    direction perpendicular to its pull, hence cxy carries a minus sign
    and the trace is sum zeta_j / beta_j.
    """
    v = _as_vertices(vertices)
    p = np.asarray(p, dtype=float)
    x, y, beta = _offsets(p, v)
    z = w.as_array() / beta**3
    cxx = float(np.dot(z, y * y))
    cyy = float(np.dot(z, x * x))
    cxy = -float(np.dot(z, x * y))
    return np.array([[cxx, cxy], [cxy, cyy]])


def junction_angles(p, vertices) -> tuple[float, float, float]:
    """Openings (gamma01, gamma12, gamma02) of the wedges at p.

    gamma_ij is the counter-clockwise angle from the ray p->P_i to the
    ray p->P_j. For p inside a counter-clockwise triangle the three
    values partition the full turn; outside, they sum to 4*pi instead.
    """
    v = _as_vertices(vertices)
    p = np.asarray(p, dtype=float)
    x, y, beta = _offsets(p, v)
    u = np.column_stack([-x / beta, -y / beta])  # unit vectors p -> P_j

    def ccw(a, b):
        ang = math.atan2(_cross(a, b), float(np.dot(a, b)))
        return ang if ang >= 0.0 else ang + 2.0 * math.pi

    return (ccw(u[0], u[1]), ccw(u[1], u[2]), ccw(u[2], u[0]))


def _vertex_pull(v: np.ndarray, w: np.ndarray, k: int) -> float:
    """Magnitude of the combined unit pull of the other two anchors at vertex k."""
    total = np.zeros(2)
    for j in range(3):
        if j == k:
            continue
        d = v[j] - v[k]
        total += w[j] * d / np.hypot(*d)
    return float(np.hypot(*total))


def fermat_solve(
    vertices, w: FermatWeights, tol: float = 1e-10, max_iterations: int = 200
) -> FermatSolution:
    """Damped Newton from the centroid for the interior weighted Fermat point.

    Raises NoInteriorMinimum (with the vertex index) when a vertex
    absorbs the others' pull, NonConvergence past max_iterations.
    """
    v = _as_vertices(vertices)
    diam = _check_nondegenerate(v)
    warr = w.as_array()

    for k in range(3):
        if _vertex_pull(v, warr, k) <= warr[k]:
            raise NoInteriorMinimum(k)

    p = v.mean(axis=0)
    cost_p = fermat_cost(p, v, w)
    for it in range(max_iterations):
        g = fermat_gradient(p, v, w)
        gn = float(np.hypot(*g))
        if gn <= tol:
            h = fermat_hessian(p, v, w)
            return FermatSolution(
                point=p,
                cost=cost_p,
                gradient_norm=gn,
                iterations=it,
                hessian_min_eigenvalue=float(np.linalg.eigvalsh(h)[0]),
            )
        h = fermat_hessian(p, v, w)
        det = h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]
        if det > 1e-30:
            step = np.array(
                [
                    (-g[0] * h[1, 1] + g[1] * h[0, 1]) / det,
                    (-g[1] * h[0, 0] + g[0] * h[0, 1]) / det,
                ]
            )
        else:
            step = -g * (0.25 * diam / gn)
        if not _point_in_triangle(p + step, v):
            step = -g * (0.25 * diam / gn)

        slope = float(np.dot(g, step))
        t = 1.0
        while t >= 1e-14:
            q = p + t * step
            cost_q = fermat_cost(q, v, w)
            if cost_q <= cost_p + ARMIJO_C * t * slope:
                break
            t *= 0.5
        else:
            raise NonConvergence("backtracking line search stalled")
        p, cost_p = q, cost_q

        dv = np.hypot(v[:, 0] - p[0], v[:, 1] - p[1])
        if float(np.min(dv)) < NEAR_VERTEX_RTOL * diam:
            raise NoInteriorMinimum(int(np.argmin(dv)))

    raise NonConvergence(f"no convergence within {max_iterations} iterations")


def _ray_intersect(origin: np.ndarray, direction: float, ray_angle: float) -> np.ndarray:
    """Point where origin + t*(cos d, sin d) meets {s*(cos a, sin a): s > 0}."""
    u = np.array([math.cos(direction), math.sin(direction)])
    r = np.array([math.cos(ray_angle), math.sin(ray_angle)])
    # Solve origin + t u = s r.
    det = -u[0] * r[1] + u[1] * r[0]
    if abs(det) < 1e-15:
        raise NonConvergence("degenerate ray intersection in triangle construction")
    t = (origin[0] * r[1] - origin[1] * r[0]) / det
    s = (origin[0] * u[1] - origin[1] * u[0]) / det
    if t <= 0.0 or s <= 0.0:
        raise NonConvergence("triangle construction rays fail to meet")
    return origin + t * u


def construct_good_triangle(
    s: SurfaceTensions, opening: float, orientation: float = 0.0
) -> GoodTriangle:
    """Build a good triangle for a sector of the given opening at the origin.

    The sector spans [orientation, orientation + opening]; p0 is the
    origin, the junction tilde_p sits on the unit circle inside the
    sector, p1 lies on the start ray and p2 on the end ray, and the
    three wedges at tilde_p open exactly (gamma01, gamma12, gamma02).
    Requires opening < gamma12 (strictly), else OpeningTooWide.
    """
    ang: NeumannAngles = neumann_angles(s)
    if not (0.0 < opening < math.pi):
        raise ValueError(f"opening must be in (0, pi), got {opening!r}")
    if opening >= ang.gamma12 - 1e-12:
        raise OpeningTooWide(
            f"opening {opening:.6g} rad must be strictly below gamma12 = "
            f"{ang.gamma12:.6g} rad"
        )

    # Admissible junction direction theta inside the sector (sector-local
    # coordinates, start ray along +x): both interval ends clamped to the
    # sector itself; the pre-clamp width is gamma12 - opening > 0.
    th_lo = max(0.0, opening + ang.gamma02 - math.pi)
    th_hi = min(opening, math.pi - ang.gamma01)
    theta = 0.5 * (th_lo + th_hi)

    tilde = np.array([math.cos(theta), math.sin(theta)])
    d0 = theta + math.pi  # ray through the origin
    d1 = d0 + ang.gamma01  # toward the start ray (angle 0)
    d2 = d1 + ang.gamma12  # toward the end ray (angle = opening)
    p1 = _ray_intersect(tilde, d1, 0.0)
    p2 = _ray_intersect(tilde, d2, opening)

    c, sn = math.cos(orientation), math.sin(orientation)
    rot = np.array([[c, -sn], [sn, c]])
    return GoodTriangle(
        p0=np.zeros(2),
        p1=rot @ p1,
        p2=rot @ p2,
        tilde_p=rot @ tilde,
    )

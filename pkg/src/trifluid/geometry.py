"""Segment/disk primitives and the adaptive quadrature shared by the
exact-configuration energy integrals."""

from __future__ import annotations

import math

import numpy as np


class QuadratureFailure(RuntimeError):
    """Adaptive refinement exceeded the depth cap without converging."""


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-10, max_depth: int = 40) -> float:
    """Integrate f over [a, b] to absolute tolerance tol.

    Classic recursive Simpson with the |S_half - S| / 15 error estimate;
    raises QuadratureFailure past max_depth levels of bisection.
    """
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth)


def _simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    err = left + right - whole
    if abs(err) <= 15.0 * tol:
        return left + right + err / 15.0
    if depth <= 0:
        raise QuadratureFailure(
            f"no convergence on [{a:.6g}, {b:.6g}] (residual {abs(err) / 15.0:.3g})"
        )
    half = 0.5 * tol
    return _simpson_rec(f, a, fa, m, fm, lm, flm, left, half, depth - 1) + _simpson_rec(
        f, m, fm, b, fb, rm, frm, right, half, depth - 1
    )


def seg_point(p: np.ndarray, q: np.ndarray, t: float) -> np.ndarray:
    return p + t * (q - p)


def seg_length(p: np.ndarray, q: np.ndarray) -> float:
    return float(np.hypot(q[0] - p[0], q[1] - p[1]))


def unit_normal(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Unit normal of the segment p->q, pointing to the right of travel.

    With interfaces oriented so fluid i lies left and fluid j right, this
    is the normal from region i into region j.
    """
    d = q - p
    length = np.hypot(d[0], d[1])
    if length == 0.0:
        raise ValueError("degenerate segment")
    return np.array([d[1] / length, -d[0] / length])


def segment_ball_interval(
    p: np.ndarray, q: np.ndarray, radius: float, center=None
) -> tuple[float, float] | None:
    """Parameter interval of {p + t(q-p): 0<=t<=1} inside the closed ball.

    Returns (t0, t1) with t0 <= t1, or None when the segment misses the
    ball.  The ball is convex so the intersection is one interval.
    """
    c = np.zeros(2) if center is None else np.asarray(center, dtype=float)
    d = q - p
    rel = p - c
    a = float(np.dot(d, d))
    if a == 0.0:
        return (0.0, 1.0) if float(np.dot(rel, rel)) <= radius * radius else None
    b = 2.0 * float(np.dot(rel, d))
    cc = float(np.dot(rel, rel)) - radius * radius
    disc = b * b - 4.0 * a * cc
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    t0 = (-b - sq) / (2.0 * a)
    t1 = (-b + sq) / (2.0 * a)
    t0, t1 = max(t0, 0.0), min(t1, 1.0)
    if t0 >= t1:
        return None
    return (t0, t1)


def segment_circle_params(
    p: np.ndarray, q: np.ndarray, radius: float, center=None
) -> list[float]:
    """Open-interval parameters where the segment crosses the circle."""
    c = np.zeros(2) if center is None else np.asarray(center, dtype=float)
    d = q - p
    rel = p - c
    a = float(np.dot(d, d))
    if a == 0.0:
        return []
    b = 2.0 * float(np.dot(rel, d))
    cc = float(np.dot(rel, rel)) - radius * radius
    disc = b * b - 4.0 * a * cc
    if disc <= 0.0:
        return []
    sq = math.sqrt(disc)
    out = [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)]
    return [t for t in out if 0.0 < t < 1.0]

"""Surface tension constants and the angle conditions they induce.

Three immiscible fluids, labeled 0, 1, 2, meet pairwise along interfaces
with tensions sigma01, sigma02, sigma12 (energy per unit length; all
constants in this package are dimensionless).  Two derived objects drive
everything downstream:

* alpha weights: per-fluid numbers with alpha_i + alpha_j == sigma_ij,
  so that summing alpha_j * perimeter(E_j) counts every interface with
  its pairwise tension.  They are positive exactly when each tension is
  strictly below the sum of the other two ("strict triangularity"),
  which is the standing admissibility assumption.
* Neumann angles: the unique sector openings at a stable triple
  junction.  gamma_ij is the opening of the sector occupied by the
  remaining fluid k, bounded by the (i,k) and (j,k) interfaces.  The
  three openings sum to a full turn and satisfy the sine balance
  sin(gamma01)/sigma01 == sin(gamma02)/sigma02 == sin(gamma12)/sigma12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Relative slack on alpha_j > 0; degenerate tension triangles make the
# junction problem ill-posed well before exact equality.
TRIANGULARITY_RTOL = 1e-12

_PAIRS = ((0, 1), (0, 2), (1, 2))


class StrictTriangularityViolated(ValueError):
    """Raised when some derived alpha weight is not strictly positive."""


@dataclass(frozen=True)
class SurfaceTensions:
    """The three pairwise interfacial tensions; validates strict triangularity."""

    sigma01: float
    sigma02: float
    sigma12: float

    def __post_init__(self):
        vals = (self.sigma01, self.sigma02, self.sigma12)
        for name, v in zip(("sigma01", "sigma02", "sigma12"), vals):
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be finite and positive, got {v!r}")
        tol = TRIANGULARITY_RTOL * max(vals)
        a = _raw_alphas(*vals)
        for j, aj in enumerate(a):
            if aj <= tol:
                raise StrictTriangularityViolated(
                    f"alpha{j} = {aj:.6g} <= 0: tensions {vals} do not form a "
                    "strict triangle"
                )

    @property
    def max_sigma(self) -> float:
        return max(self.sigma01, self.sigma02, self.sigma12)

    def pair(self, i: int, j: int) -> float:
        """Tension of the (i, j) interface, order-insensitive."""
        key = (min(i, j), max(i, j))
        if key == (0, 1):
            return self.sigma01
        if key == (0, 2):
            return self.sigma02
        if key == (1, 2):
            return self.sigma12
        raise ValueError(f"no interface between fluids {i} and {j}")

    def as_matrix(self) -> np.ndarray:
        """Symmetric 3x3 tension matrix with zero diagonal."""
        m = np.zeros((3, 3))
        for (i, j) in _PAIRS:
            m[i, j] = m[j, i] = self.pair(i, j)
        return m

    def scaled(self, factor: float) -> "SurfaceTensions":
        return SurfaceTensions(
            self.sigma01 * factor, self.sigma02 * factor, self.sigma12 * factor
        )


@dataclass(frozen=True)
class AlphaWeights:
    """Per-fluid perimeter weights; alpha_i + alpha_j reproduces sigma_ij."""

    alpha0: float
    alpha1: float
    alpha2: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha0, self.alpha1, self.alpha2)


@dataclass(frozen=True)
class NeumannAngles:
    """Sector openings (radians) at a triple junction.

    gamma_ij is the opening of fluid k's sector, {i, j, k} = {0, 1, 2}.
    """

    gamma01: float
    gamma02: float
    gamma12: float

    def opening_of_fluid(self, k: int) -> float:
        """Opening of the sector occupied by fluid k."""
        if k == 0:
            return self.gamma12
        if k == 1:
            return self.gamma02
        if k == 2:
            return self.gamma01
        raise ValueError(f"fluid index must be 0, 1 or 2, got {k}")

    def degrees(self) -> tuple[float, float, float]:
        return (
            math.degrees(self.gamma01),
            math.degrees(self.gamma02),
            math.degrees(self.gamma12),
        )


@dataclass(frozen=True)
class EnergyParams:
    """Constitutive constants for the full energy.

    sigmas weight interface length, betas weight container-boundary
    length per fluid (wetting), rhos and g weight the per-fluid height
    integral (gravity).  Admissibility requires
    alpha_i + alpha_j >= |beta_i - beta_j| for every pair, otherwise
    the wetting term could be driven to -infinity by thin films.
    """

    sigmas: SurfaceTensions
    betas: tuple[float, float, float] = (0.0, 0.0, 0.0)
    rhos: tuple[float, float, float] = (0.0, 0.0, 0.0)
    g: float = 0.0

    def __post_init__(self):
        if len(self.betas) != 3 or len(self.rhos) != 3:
            raise ValueError("betas and rhos must each have three entries")
        for v in (*self.betas, *self.rhos, self.g):
            if not math.isfinite(v):
                raise ValueError("all energy parameters must be finite")
        a = alphas_from_sigmas(self.sigmas).as_tuple()
        tol = TRIANGULARITY_RTOL * self.sigmas.max_sigma
        for (i, j) in _PAIRS:
            if a[i] + a[j] < abs(self.betas[i] - self.betas[j]) - tol:
                raise ValueError(
                    f"wetting coefficients inadmissible: |beta{i} - beta{j}| = "
                    f"{abs(self.betas[i] - self.betas[j]):.6g} exceeds "
                    f"alpha{i} + alpha{j} = {a[i] + a[j]:.6g}"
                )


def _raw_alphas(s01: float, s02: float, s12: float) -> tuple[float, float, float]:
    return (
        0.5 * (s01 + s02 - s12),
        0.5 * (s01 + s12 - s02),
        0.5 * (s02 + s12 - s01),
    )


def alphas_from_sigmas(s: SurfaceTensions) -> AlphaWeights:
    """Half-sum weights: alpha0 = (s01 + s02 - s12)/2 and cyclic variants."""
    return AlphaWeights(*_raw_alphas(s.sigma01, s.sigma02, s.sigma12))


def _opposite_angle(a: float, b: float, c: float) -> float:
    """Angle opposite side c in the triangle with side lengths a, b, c."""
    x = (a * a + b * b - c * c) / (2.0 * a * b)
    return math.acos(min(1.0, max(-1.0, x)))


def neumann_angles(s: SurfaceTensions) -> NeumannAngles:
    """Junction openings gamma_ij = pi - theta_ij.

    theta_ij is the angle opposite the side of length sigma_ij in the
    triangle with sides (sigma01, sigma02, sigma12).  The law of cosines
    (with a clamped acos argument) is used instead of the law of sines
    because arcsin cannot tell theta from pi - theta.
    """
    g01 = math.pi - _opposite_angle(s.sigma02, s.sigma12, s.sigma01)
    g02 = math.pi - _opposite_angle(s.sigma01, s.sigma12, s.sigma02)
    g12 = math.pi - _opposite_angle(s.sigma01, s.sigma02, s.sigma12)
    return NeumannAngles(g01, g02, g12)

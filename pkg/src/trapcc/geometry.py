"""Geometry of the symmetric four-body trapezoid.

Conventions used throughout the package:

* the bottom pair (bodies 1 and 4, each of mass ``M``) spans unit length,
  so every length is expressed in units of the bottom side;
* ``alpha`` is the top/bottom side ratio, ``beta`` the vertical separation
  of the two parallel sides;
* body 1 sits at ``(-0.5, -r_B)``, body 2 at ``(-alpha/2, r_A)``, body 3
  at ``(alpha/2, r_A)``, body 4 at ``(0.5, -r_B)``, with ``r_A + r_B = beta``
  split so that the mass-weighted centre of the four bodies is the origin
  (the ``M`` pair below the centre, the ``m`` pair above it).

Only two mutual distances enter the mass formulas, and they enter cubed:
``a`` for the lateral pairs (1-2 and 3-4) and ``b`` for the diagonals
(1-3 and 2-4).
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass

import numpy as np

BETA_MAX_DEFAULT = 2.0


class DegenerateMassError(ValueError):
    """Masses that cannot define a configuration (non-positive in strict
    mode, or summing to zero so the centre-of-mass split is undefined)."""


@dataclass(frozen=True)
class PlanarPoint:
    """A 2-vector in the configuration plane (also used for velocities)."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite components: ({self.x}, {self.y})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


@dataclass(frozen=True)
class TrapezoidParams:
    """Shape parameters of the trapezoid at unit bottom-side scale.

    ``alpha`` must lie in (0, 1]: alpha = 1 is the rectangle, alpha = 0
    would collide bodies 2 and 3.  Values above 1 describe the same shape
    rescaled by the top side and are rejected with a hint.  ``beta`` must
    be positive (beta = 0 collapses to a collinear arrangement) and is
    capped at ``beta_max`` (default 2) to keep grids bounded.
    """

    alpha: float
    beta: float
    beta_max: InitVar[float] = BETA_MAX_DEFAULT

    def __post_init__(self, beta_max):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValueError("alpha and beta must be finite")
        if self.alpha <= 0.0:
            raise ValueError("alpha must be positive (alpha = 0 collides bodies 2 and 3)")
        if self.alpha > 1.0:
            raise ValueError(
                f"alpha must not exceed 1; alpha={self.alpha} is the same shape as "
                f"(alpha={1.0 / self.alpha}, beta={self.beta / self.alpha}) after "
                "rescaling by the top side"
            )
        if self.beta <= 0.0:
            raise ValueError("beta must be positive (beta = 0 is collinear)")
        if self.beta > beta_max:
            raise ValueError(f"beta={self.beta} exceeds the configured maximum {beta_max}")


@dataclass(frozen=True)
class DistanceCubes:
    """Cubed mutual distances: ``a`` for the lateral pairs, ``b`` for the
    diagonals.  ``a < b`` strictly whenever alpha > 0."""

    a: float
    b: float


@dataclass(frozen=True)
class TrapezoidConfiguration:
    """The four body positions plus the vertical split of ``beta``.

    ``r_A`` is the distance from the system centre of mass to the line of
    the upper (mass ``m``) pair, ``r_B`` to the line of the lower (mass
    ``M``) pair.  Both are signed: negative masses push the centre of mass
    outside the strip, which flips a sign.
    """

    positions: tuple[PlanarPoint, PlanarPoint, PlanarPoint, PlanarPoint]
    r_A: float
    r_B: float


def distance_cubes_values(alpha, beta):
    """Cubed lateral and diagonal distances; works on scalars or arrays."""
    a = ((0.5 - 0.5 * alpha) ** 2 + beta**2) ** 1.5
    b = ((0.5 + 0.5 * alpha) ** 2 + beta**2) ** 1.5
    return a, b


def compute_distance_cubes(params: TrapezoidParams) -> DistanceCubes:
    a, b = distance_cubes_values(params.alpha, params.beta)
    return DistanceCubes(a=float(a), b=float(b))


def build_configuration(
    params: TrapezoidParams, m: float, M: float, strict: bool = True
) -> TrapezoidConfiguration:
    """Place the four bodies so the mass-weighted centre is the origin.

    Parameters
    ----------
    params : TrapezoidParams
        Shape of the trapezoid.
    m, M : float
        Masses of the upper pair (bodies 2, 3) and lower pair (bodies 1, 4).
    strict : bool
        When true (default), both masses must be positive.  The relaxed
        mode accepts any masses with ``m + M != 0``, which is needed for
        algebraic checks with sign-indefinite masses.

    Raises
    ------
    DegenerateMassError
        If the masses are rejected under the selected mode.
    """
    if strict and not (m > 0.0 and M > 0.0):
        raise DegenerateMassError(
            f"strict mode requires positive masses, got m={m}, M={M}"
        )
    total = m + M
    if total == 0.0:
        raise DegenerateMassError("m + M = 0: centre-of-mass split undefined")
    r_A = M * params.beta / total
    r_B = m * params.beta / total
    half_top = 0.5 * params.alpha
    positions = (
        PlanarPoint(-0.5, -r_B),
        PlanarPoint(-half_top, r_A),
        PlanarPoint(half_top, r_A),
        PlanarPoint(0.5, -r_B),
    )
    return TrapezoidConfiguration(positions=positions, r_A=r_A, r_B=r_B)


def reconstruct_positions(
    offset: PlanarPoint, bottom_edge: PlanarPoint, m: float, M: float, alpha: float
) -> tuple[PlanarPoint, PlanarPoint, PlanarPoint, PlanarPoint]:
    """Rebuild the four positions from the two generating vectors.

    ``offset`` is the vector from the lower-pair midpoint to the upper-pair
    midpoint; ``bottom_edge`` the vector from body 4 to body 1.  Every body
    position is a linear combination of these two:

        r1 = -m/(m+M) * offset + 1/2     * bottom_edge
        r2 =  M/(m+M) * offset + alpha/2 * bottom_edge
        r3 =  M/(m+M) * offset - alpha/2 * bottom_edge
        r4 = -m/(m+M) * offset - 1/2     * bottom_edge

    The ``alpha`` factor is needed for the inner pair; for the standard
    configuration pass offset=(0, beta), bottom_edge=(-1, 0).
    """
    total = m + M
    if total == 0.0:
        raise DegenerateMassError("m + M = 0: decomposition weights undefined")
    w_out = -m / total
    w_in = M / total
    half = 0.5
    half_top = 0.5 * alpha

    def combine(w, s):
        return PlanarPoint(
            w * offset.x + s * bottom_edge.x,
            w * offset.y + s * bottom_edge.y,
        )

    return (
        combine(w_out, half),
        combine(w_in, half_top),
        combine(w_in, -half_top),
        combine(w_out, -half),
    )

"""Closed-form masses for the trapezoid and their sign analysis.

With the bottom side at unit length and the multiplier normalised to 1,
requiring the two reduced balance equations

    2*M - m*(alpha - 1)/a + m*(alpha + 1)/b = 1        (outer pair)
    (m + M) * (1/a + 1/b) = 1                          (pair sums)

to hold simultaneously determines the masses in closed form:

    m = a*b*f1 / ((a + b) * f3)
    M = a*b*alpha*f2 / ((a + b) * f3)

where f1 = a + b - 2ab, f2 = a - b and f3 = f1 + alpha*f2.  The signs of
f1 and f3 decide where the masses are positive (f2 is negative on the
whole domain), and f3 = 0 is the degenerate curve on which the closed
forms blow up.

Substituting the closed forms back gives m + M = a*b/(a + b), so both
equations hold with multiplier exactly 1; this is what pins lambda = 1
throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .geometry import DistanceCubes, TrapezoidParams, compute_distance_cubes

DEGENERACY_TOL = 1e-12


class DegenerateConfigurationError(ValueError):
    """Raised on (or numerically too close to) the f3 = 0 curve, where the
    closed-form masses are unbounded and the linear system is singular."""


class RegionLabel(Enum):
    """Classification of a parameter point by the signs of the two masses."""

    BOTH_POSITIVE = "BothPositive"
    ONLY_M_LOWER_POSITIVE = "OnlyMLowerPositive"  # M > 0, m <= 0
    ONLY_M_UPPER_POSITIVE = "OnlyMUpperPositive"  # m > 0, M <= 0
    NONE_POSITIVE = "NonePositive"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class SignTriple:
    f1: float
    f2: float
    f3: float


@dataclass(frozen=True)
class MassSolution:
    """Masses of the two pairs with their sign diagnostics.

    ``m`` belongs to the upper pair (bodies 2, 3), ``M`` to the lower pair
    (bodies 1, 4).  ``lam`` is the balance multiplier, identically 1 under
    this normalisation.  Either mass may be negative; positivity is the
    caller's concern (see :func:`classify`).
    """

    m: float
    M: float
    lam: float
    signs: SignTriple


def sign_values(a, b, alpha):
    """f1, f2, f3 from the cubed distances; works on scalars or arrays."""
    f1 = a + b - 2.0 * a * b
    f2 = a - b
    f3 = f1 + alpha * f2
    return f1, f2, f3


def mass_values(a, b, alpha):
    """Closed-form (m, M) plus the sign triple; array friendly.

    No degeneracy guard: near f3 = 0 the quotients overflow or lose
    precision, which callers handling grids mask themselves.
    """
    f1, f2, f3 = sign_values(a, b, alpha)
    denom = (a + b) * f3
    with np.errstate(divide="ignore", invalid="ignore"):
        m = a * b * f1 / denom
        M = a * b * alpha * f2 / denom
    return m, M, f1, f2, f3


def sign_functions(cubes: DistanceCubes, alpha: float) -> SignTriple:
    f1, f2, f3 = sign_values(cubes.a, cubes.b, alpha)
    return SignTriple(f1=float(f1), f2=float(f2), f3=float(f3))


def is_degenerate(f3: float, a: float, b: float, tol: float = DEGENERACY_TOL) -> bool:
    """The degeneracy test shared by every solver path: |f3| measured
    relative to a + b, the natural scale of the sign functions."""
    return abs(f3) < tol * (a + b)


def solve_masses(params: TrapezoidParams, tol: float = DEGENERACY_TOL) -> MassSolution:
    """Evaluate the closed-form masses at a parameter point.

    Raises
    ------
    DegenerateConfigurationError
        When |f3| < tol * (a + b); the masses are unbounded there.
    """
    cubes = compute_distance_cubes(params)
    signs = sign_functions(cubes, params.alpha)
    if is_degenerate(signs.f3, cubes.a, cubes.b, tol):
        raise DegenerateConfigurationError(
            f"f3 = {signs.f3:.3e} is within {tol:.1e} * (a + b) of the "
            f"degenerate curve at (alpha={params.alpha}, beta={params.beta})"
        )
    scale = cubes.a * cubes.b / ((cubes.a + cubes.b) * signs.f3)
    return MassSolution(
        m=signs.f1 * scale,
        M=params.alpha * signs.f2 * scale,
        lam=1.0,
        signs=signs,
    )


def solve_masses_linear(
    params: TrapezoidParams, tol: float = DEGENERACY_TOL
) -> tuple[float, float]:
    """Solve the two balance equations as a 2x2 linear system.

    This route never touches the closed forms: the coefficient matrix is
    assembled from the equations themselves and handed to a generic linear
    solver.  It is the independent cross-check for :func:`solve_masses`.

    Raises
    ------
    DegenerateConfigurationError
        When the system is singular, which happens exactly on the f3 = 0
        curve (the determinant equals (a + b) * f3 / (a*b)^2).
    """
    cubes = compute_distance_cubes(params)
    a, b, alpha = cubes.a, cubes.b, params.alpha
    pair_sum = 1.0 / a + 1.0 / b
    matrix = np.array(
        [
            [-(alpha - 1.0) / a + (alpha + 1.0) / b, 2.0],
            [pair_sum, pair_sum],
        ]
    )
    det = float(np.linalg.det(matrix))
    # rescale the determinant to the f3 scale so this gate coincides with
    # the closed-form degeneracy test
    f3_equivalent = det * (a * b) ** 2 / (a + b)
    if is_degenerate(f3_equivalent, a, b, tol):
        raise DegenerateConfigurationError(
            f"singular balance system at (alpha={params.alpha}, beta={params.beta}); "
            f"determinant corresponds to f3 = {f3_equivalent:.3e}"
        )
    m, M = np.linalg.solve(matrix, np.array([1.0, 1.0]))
    return float(m), float(M)


def label_from_masses(m: float, M: float) -> RegionLabel:
    if m > 0.0 and M > 0.0:
        return RegionLabel.BOTH_POSITIVE
    if M > 0.0:
        return RegionLabel.ONLY_M_LOWER_POSITIVE
    if m > 0.0:
        return RegionLabel.ONLY_M_UPPER_POSITIVE
    return RegionLabel.NONE_POSITIVE


def _label_from_signs(f1: float, f3: float) -> RegionLabel:
    # M > 0 iff f3 < 0 (f2 < 0 always); m > 0 iff f1 and f3 share a sign
    m_positive = (f1 < 0.0 and f3 < 0.0) or (f1 > 0.0 and f3 > 0.0)
    M_positive = f3 < 0.0
    if m_positive and M_positive:
        return RegionLabel.BOTH_POSITIVE
    if M_positive:
        return RegionLabel.ONLY_M_LOWER_POSITIVE
    if m_positive:
        return RegionLabel.ONLY_M_UPPER_POSITIVE
    return RegionLabel.NONE_POSITIVE


def classify(params: TrapezoidParams, tol: float = DEGENERACY_TOL) -> RegionLabel:
    """Label a parameter point by the signs of the solved masses.

    Degenerate points get their own label instead of an exception, so a
    grid sweep always produces exactly one label per point.
    """
    try:
        solution = solve_masses(params, tol)
    except DegenerateConfigurationError:
        return RegionLabel.DEGENERATE
    label = label_from_masses(solution.m, solution.M)
    assert label == _label_from_signs(solution.signs.f1, solution.signs.f3)
    return label

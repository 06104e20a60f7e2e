import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trapcc.geometry import TrapezoidParams
from trapcc.masses import solve_masses
from trapcc.oracle import (
    PlanarSystem,
    attraction_field,
    cc_residual,
    center_of_mass,
    is_central_configuration,
    potential_and_moment,
    trapezoid_system,
)
from trapcc.regions import bisect

SQUARE_MASS = 2.0**1.5 / (2.0 * (1.0 + 2.0**1.5))  # equal-mass square solution


def square_system(mass=SQUARE_MASS):
    return PlanarSystem.from_bodies(
        [
            (mass, (-0.5, -0.5)),
            (mass, (-0.5, 0.5)),
            (mass, (0.5, 0.5)),
            (mass, (0.5, -0.5)),
        ]
    )


def lagrange_triangle(mass=1.0):
    height = math.sqrt(3.0) / 2.0
    points = [(-0.5, 0.0), (0.5, 0.0), (0.0, height)]
    return PlanarSystem.from_bodies([(mass, p) for p in points])


def inner_pair_consistency(alpha, beta):
    """Determinant of the three independent balance equations in
    (m, M, lambda); its zero set is where one mass pair can make the
    trapezoid genuinely central.  Assembled here from scratch as an
    oracle independent of the library."""
    a = ((0.5 - alpha / 2) ** 2 + beta**2) ** 1.5
    b = ((0.5 + alpha / 2) ** 2 + beta**2) ** 1.5
    s = 1.0 / a + 1.0 / b
    rows = [
        [-(alpha - 1.0) / a + (alpha + 1.0) / b, 2.0, -1.0],
        [s, s, -1.0],
        [2.0 / alpha**2, -(1.0 - alpha) / a + (1.0 + alpha) / b, -alpha],
    ]
    return float(np.linalg.det(np.array(rows)))


class TestPlanarSystem:
    def test_requires_two_bodies(self):
        with pytest.raises(ValueError, match="at least 2"):
            PlanarSystem.from_bodies([(1.0, (0.0, 0.0))])

    def test_rejects_coincident_bodies(self):
        with pytest.raises(ValueError, match="closer than"):
            PlanarSystem.from_bodies([(1.0, (0.0, 0.0)), (1.0, (0.0, 1e-12))])

    def test_rejects_zero_total_mass(self):
        with pytest.raises(ValueError, match="total mass"):
            PlanarSystem.from_bodies([(1.0, (0.0, 0.0)), (-1.0, (1.0, 0.0))])

    def test_negative_masses_allowed(self):
        PlanarSystem.from_bodies([(1.0, (0.0, 0.0)), (-0.5, (1.0, 0.0))])


class TestCenterOfMass:
    def test_symmetric_pair(self):
        system = PlanarSystem.from_bodies([(1.0, (-1.0, 0.0)), (1.0, (1.0, 0.0))])
        com = center_of_mass(system)
        assert com.x == 0.0 and com.y == 0.0

    def test_weighted_mean(self):
        system = PlanarSystem.from_bodies([(1.0, (0.0, 0.0)), (3.0, (4.0, 0.0))])
        com = center_of_mass(system)
        assert com.x == pytest.approx(3.0)
        assert com.y == 0.0

    def test_built_trapezoid_centred(self):
        params = TrapezoidParams(0.5, 1.0)
        solution = solve_masses(params)
        com = center_of_mass(trapezoid_system(params, solution.m, solution.M))
        assert abs(com.x) <= 1e-14 and abs(com.y) <= 1e-14


class TestPotentialAndMoment:
    def test_unit_pair(self):
        system = PlanarSystem.from_bodies([(1.0, (0.0, 0.0)), (1.0, (1.0, 0.0))])
        potential, _ = potential_and_moment(system)
        assert potential == pytest.approx(1.0)

    def test_unit_square_unit_masses(self):
        system = PlanarSystem.from_bodies(
            [(1.0, (-0.5, -0.5)), (1.0, (-0.5, 0.5)), (1.0, (0.5, 0.5)), (1.0, (0.5, -0.5))]
        )
        potential, moment = potential_and_moment(system)
        assert potential == pytest.approx(4.0 + 2.0 / math.sqrt(2.0), rel=1e-14)
        assert moment == pytest.approx(1.0, rel=1e-14)

    def test_mass_weighted_pair(self):
        system = PlanarSystem.from_bodies([(2.0, (0.0, 0.0)), (3.0, (2.0, 0.0))])
        potential, _ = potential_and_moment(system)
        assert potential == pytest.approx(3.0)


class TestCcResidual:
    def test_square_is_central_at_unit_multiplier(self):
        report = cc_residual(square_system(), lam=1.0)
        assert report.max_residual <= 1e-12
        assert report.lambda_energy == pytest.approx(1.0, abs=1e-12)
        for lam in report.lambda_per_body:
            assert lam == pytest.approx(1.0, abs=1e-12)

    def test_perturbed_masses_break_centrality(self):
        params = TrapezoidParams(0.5, 1.0)
        solution = solve_masses(params)
        system = trapezoid_system(params, solution.m * 1.1, solution.M)
        report = cc_residual(system, lam=1.0)
        assert report.max_residual / report.attraction_scale > 1e-3

    def test_wrong_multiplier_detected(self):
        report = cc_residual(square_system(), lam=2.0)
        assert report.max_residual / report.attraction_scale > 1e-2


class TestIsCentralConfiguration:
    def test_lagrange_triangle(self):
        verdict, report = is_central_configuration(lagrange_triangle())
        assert verdict
        assert report.max_residual <= 1e-12 * report.attraction_scale

    def test_square(self):
        verdict, report = is_central_configuration(square_system())
        assert verdict
        assert report.lambda_energy == pytest.approx(1.0, abs=1e-12)

    def test_random_positions_rejected(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            pos = rng.uniform(-1.0, 1.0, size=(4, 2))
            system = PlanarSystem.from_bodies([(1.0, p) for p in pos])
            verdict, _ = is_central_configuration(system)
            assert not verdict

    @given(
        dx=st.floats(min_value=-5.0, max_value=5.0),
        dy=st.floats(min_value=-5.0, max_value=5.0),
    )
    @settings(max_examples=50, deadline=None)
    def test_translation_invariance(self, dx, dy):
        base, _ = is_central_configuration(square_system())
        moved, _ = is_central_configuration(square_system().translated(dx, dy))
        assert moved == base

    @given(scale=st.floats(min_value=0.1, max_value=10.0))
    @settings(max_examples=50, deadline=None)
    def test_scaling_rescales_multiplier(self, scale):
        system = square_system()
        scaled = PlanarSystem.from_bodies(
            [(m, (p.x * scale, p.y * scale)) for m, p in zip(system.masses, system.positions)]
        )
        verdict_base, report_base = is_central_configuration(system)
        verdict_scaled, report_scaled = is_central_configuration(scaled)
        assert verdict_scaled == verdict_base
        assert report_scaled.lambda_energy == pytest.approx(
            report_base.lambda_energy * scale**-3, rel=1e-10
        )


class TestTrapezoidFamily:
    """What the closed-form masses do and do not guarantee.

    The masses enforce the outer-pair and pair-sum balance equations, which
    fixes the multiplier at 1.  The remaining independent equation (the
    inner-pair balance along the top side) holds only on a one-dimensional
    locus of the parameter plane; the oracle must confirm centrality
    exactly there and report a defect elsewhere.
    """

    def test_balance_projections_hold_everywhere(self):
        for alpha, beta in [(0.3, 0.4), (0.5, 1.0), (0.9, 1.7), (0.5, 0.5)]:
            params = TrapezoidParams(alpha, beta)
            solution = solve_masses(params)
            system = trapezoid_system(params, solution.m, solution.M)
            masses = system.mass_array()
            pos = system.position_array()
            acc = attraction_field(masses, pos)
            defect = acc + pos  # multiplier 1, centre of mass at origin
            # vertical components balance for every body (pair-sum equation)
            assert np.max(np.abs(defect[:, 1])) <= 1e-12 * np.abs(acc).max()
            # horizontal components balance for the outer pair
            assert abs(defect[0, 0]) <= 1e-12 * np.abs(acc).max()
            assert abs(defect[3, 0]) <= 1e-12 * np.abs(acc).max()

    def test_centrality_on_consistency_locus(self):
        found = bisect(lambda beta: inner_pair_consistency(0.5, beta), 0.5, 1.5, xtol=0.0)
        assert found.root is not None
        assert found.root == pytest.approx(0.8771966348582857, abs=1e-9)
        params = TrapezoidParams(0.5, found.root)
        solution = solve_masses(params)
        assert solution.m > 0 and solution.M > 0
        verdict, report = is_central_configuration(trapezoid_system(params, solution.m, solution.M))
        assert verdict
        assert report.max_residual <= 1e-10 * report.attraction_scale

    def test_square_lies_on_consistency_locus(self):
        assert inner_pair_consistency(1.0, 1.0) == pytest.approx(0.0, abs=1e-14)

    def test_off_locus_defect_is_order_one(self):
        params = TrapezoidParams(0.5, 1.0)
        solution = solve_masses(params)
        report = cc_residual(trapezoid_system(params, solution.m, solution.M), lam=1.0)
        assert report.max_residual / report.attraction_scale > 0.1


def test_attraction_sums_to_zero_weighted():
    rng = np.random.default_rng(11)
    for _ in range(10):
        masses = rng.uniform(0.1, 3.0, size=5)
        pos = rng.uniform(-2.0, 2.0, size=(5, 2))
        acc = attraction_field(masses, pos)
        net = (masses[:, None] * acc).sum(axis=0)
        assert np.max(np.abs(net)) <= 1e-13 * np.abs(masses[:, None] * acc).max()

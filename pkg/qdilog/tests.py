# qdilog/tests.py

import cmath
import math

import numpy as np
from django.test import SimpleTestCase

from params.models import Regime, RegimeError, dual, params_from_tau

from .dilog import LadderExhaustedError, PoleProximityError, QDilog
from .zeros import (
    ContourGuardError,
    circle_contour,
    count_zeros_on_level,
    level_windings,
    lower_strip_scan,
    winding_number,
)

REGIME_II_TAUS = (cmath.exp(1j * math.pi / 3), 1j, cmath.exp(2j * math.pi / 5))
REGIME_I_TAUS = (2.0, 0.5)


def evaluator(tau, regime=Regime.II, **kwargs):
    return QDilog(params_from_tau(tau, regime), **kwargs)


def strip_grid(g, size=10):
    hw = 0.9 * g.half_width
    return [complex(x, y) for x in np.linspace(-1, 1, size) for y in np.linspace(-hw, hw, size)]


class CalibrationTests(SimpleTestCase):

    def test_argument_negation_is_selected(self):
        for tau in REGIME_II_TAUS:
            g = evaluator(tau)
            self.assertTrue(g.calibration.negate)
            self.assertFalse(g.calibration.invert)
            self.assertLess(g.calibration.d1_residual, 1e-8)
            self.assertLess(g.calibration.d2_residual, 1e-8)

    def test_value_at_origin(self):
        g = evaluator(1j)
        self.assertAlmostEqual(abs(g.gamma(0) - 1), 0, delta=1e-10)
        for tau, regime in ((cmath.exp(1j * math.pi / 3), Regime.II), (1.0, Regime.I), (4.0, Regime.I)):
            g = evaluator(tau, regime)
            self.assertAlmostEqual(abs(g.gamma(0) - g.gamma_at_origin()), 0, delta=1e-10)
        self.assertAlmostEqual(evaluator(1.0, Regime.I).gamma_at_origin(), cmath.exp(1j * math.pi / 12), delta=1e-14)

    def test_node_doubling(self):
        p = params_from_tau(cmath.exp(1j * math.pi / 3), Regime.II)
        coarse = QDilog(p, nodes=2048)
        fine = QDilog(p, nodes=4096)
        for zeta in (0, 0.3 + 0.1j, -0.8 - 0.2j):
            self.assertLess(abs(coarse.gamma(zeta) - fine.gamma(zeta)), 1e-10 * abs(fine.gamma(zeta)))

    def test_nodes_follow_the_real_part(self):
        g = evaluator(1j)
        self.assertEqual(g._density(np.array([0.5, -1.2])), 1)
        self.assertEqual(g._density(np.array([-6 + 0.1j])), 4)
        self.assertGreater(g._density(np.array([40.0])), g._density(np.array([6.0])))

    def test_far_real_part(self):
        for tau in (cmath.exp(1j * math.pi / 3), 1j):
            p = params_from_tau(tau, Regime.II)
            coarse = QDilog(p, nodes=2048)
            fine = QDilog(p, nodes=4096)
            for zeta in (-6 + 0.1j, 6 - 0.1j, -4.5):
                self.assertLess(coarse.d1_residual(zeta), 1e-8, f"tau={tau} zeta={zeta}")
                self.assertLess(coarse.d2_residual(zeta), 1e-8, f"tau={tau} zeta={zeta}")
                expected = fine.gamma(zeta)
                self.assertLess(abs(coarse.gamma(zeta) - expected), 1e-10 * abs(expected), f"tau={tau} zeta={zeta}")


class FunctionalEquationTests(SimpleTestCase):

    def test_d1_example(self):
        g = evaluator(cmath.exp(1j * math.pi / 3))
        self.assertLess(g.d1_residual(0.3j), 1e-8)

    def test_residual_grids_regime_ii(self):
        for tau in REGIME_II_TAUS:
            g = evaluator(tau)
            for zeta in strip_grid(g):
                self.assertLess(g.d1_residual(zeta), 1e-8, f"tau={tau} zeta={zeta}")
                self.assertLess(g.d2_residual(zeta), 1e-8, f"tau={tau} zeta={zeta}")

    def test_residual_grids_regime_i(self):
        for tau in REGIME_I_TAUS:
            g = evaluator(tau, Regime.I)
            for zeta in strip_grid(g):
                self.assertLess(g.d1_residual(zeta), 1e-8, f"tau={tau} zeta={zeta}")
                self.assertLess(g.d2_residual(zeta), 1e-8, f"tau={tau} zeta={zeta}")

    def test_ladder_far_from_strip(self):
        g = evaluator(1j)
        for zeta in (0.2 + 2.3j, -0.4 - 1.9j, 0.1 + 3.1j):
            self.assertLess(g.d1_residual(zeta), 1e-8)
            self.assertLess(g.d2_residual(zeta), 1e-8)

    def test_duality(self):
        for tau, regime in ((1j, Regime.II), (cmath.exp(2j * math.pi / 5), Regime.II), (2.0, Regime.I)):
            p = params_from_tau(tau, regime)
            g, g_dual = QDilog(p), QDilog(dual(p))
            for zeta in (0.0, 0.3 + 0.1j, -0.7 - 0.15j, 0.25 + 0.9j):
                expected = g.gamma(zeta)
                self.assertLess(abs(g_dual.gamma(zeta) - expected), 1e-10 * abs(expected))

    def test_shift_relation(self):
        g = evaluator(cmath.exp(1j * math.pi / 3))
        self.assertLess(g.shift_relation_residual(0.2 + 0.1j), 1e-8)
        g = evaluator(1j)
        for x in (-0.9, -0.35, 0.1, 0.6):
            self.assertLess(g.shift_relation_residual(x), 1e-8)

    def test_shift_relation_at_sine_zero(self):
        g = evaluator(1j)
        zeta = 2 * g.params.omega
        self.assertLess(g.shift_relation_residual(zeta), 1e-8)
        self.assertLess(abs(g.gamma(zeta + g.params.omega_pp)), 1e-8 * abs(g.gamma(zeta - g.params.omega_pp)))

    def test_reflection(self):
        for tau, regime in ((1j, Regime.II), (2.0, Regime.I)):
            g = evaluator(tau, regime)
            for zeta in (0.3, 0.2 + 0.15j, -0.5 + 0.3j):
                self.assertLess(g.reflection_residual(zeta), 1e-8)

    def test_tabulate(self):
        g = evaluator(1j)
        rows = g.tabulate([0.1, 0.2 + 0.1j])
        self.assertEqual(len(rows), 2)
        self.assertEqual(len(rows[0]), 6)
        self.assertEqual(rows[1][:2], (0.2, 0.1))
        self.assertLess(max(rows[0][4], rows[0][5]), 1e-8)


class LatticeTests(SimpleTestCase):

    def test_zero_lattice(self):
        g = evaluator(1j)
        r = math.sqrt(2) / 2
        self.assertAlmostEqual(g.zero_lattice(0, 0), g.params.omega_pp)
        self.assertAlmostEqual(g.zero_lattice(1, 0), 1j * r + r * (1 + 1j), delta=1e-14)
        self.assertEqual(g.pole_lattice(0, 0), -g.params.omega_pp)

    def test_zero_levels(self):
        g = evaluator(cmath.exp(2j * math.pi / 5))
        for p in range(4):
            for q in range(4):
                self.assertAlmostEqual(g.zero_lattice(p, q).imag, g.params.mu * (1 + p + q), delta=1e-12)

    def test_gamma_vanishes_on_lattice(self):
        g = evaluator(cmath.exp(1j * math.pi / 3))
        for p, q in ((0, 0), (1, 0), (0, 1)):
            zero = g.zero_lattice(p, q)
            scale = abs(g.gamma(zero + 0.05 * g.params.mu))
            self.assertLess(abs(g.gamma(zero)), 1e-8 * scale)

    def test_pole_proximity(self):
        g = evaluator(1j)
        with self.assertRaises(PoleProximityError):
            g.gamma(-g.params.omega_pp)
        with self.assertRaises(PoleProximityError):
            g.gamma(g.pole_lattice(1, 0) + 1e-8)

    def test_ladder_exhaustion(self):
        g = evaluator(1j, max_steps=2)
        with self.assertRaises(LadderExhaustedError):
            g.gamma(10j * g.params.mu)


class WindingTests(SimpleTestCase):

    def test_analytic_windings(self):
        circle = circle_contour(0, 1.0, 128)
        self.assertEqual(winding_number(lambda z: z, circle), 1)
        self.assertEqual(winding_number(lambda z: z * z, circle), 2)
        self.assertEqual(winding_number(lambda z: 1 / z, circle), -1)
        self.assertEqual(winding_number(lambda z: z - 3, circle), 0)

    def test_polyline_subdivision(self):
        square = [1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]
        self.assertEqual(winding_number(lambda z: z, square, nodes=400), 1)

    def test_guard_trips_on_zero(self):
        with self.assertRaises(ContourGuardError):
            winding_number(lambda z: z - 1, circle_contour(0, 1.0, 64))

    def test_single_zero_at_omega_pp(self):
        g = evaluator(cmath.exp(1j * math.pi / 3))
        contour = circle_contour(g.params.omega_pp, 0.1 * g.params.mu)
        self.assertEqual(winding_number(g.gamma, contour), 1)

    def test_pole_at_minus_omega_pp(self):
        g = evaluator(1j)
        contour = circle_contour(-g.params.omega_pp, 0.1 * g.params.mu)
        self.assertEqual(winding_number(g.gamma, contour), -1)

    def test_each_lattice_zero_is_simple(self):
        g = evaluator(1j)
        for level in range(4):
            for p in range(level + 1):
                contour = circle_contour(g.zero_lattice(p, level - p), 0.1 * g.params.mu)
                self.assertEqual(winding_number(g.gamma, contour), 1, f"p={p} q={level - p}")

    def test_count_zeros_on_level(self):
        g = evaluator(1j)
        for n in range(1, 5):
            self.assertEqual(count_zeros_on_level(g, n), n)
        self.assertEqual(count_zeros_on_level(evaluator(cmath.exp(1j * math.pi / 3)), 3), 3)

    def test_level_windings_are_each_one(self):
        g = evaluator(cmath.exp(1j * math.pi / 3))
        windings = level_windings(g, 4)
        self.assertEqual([w for _, w in windings], [1, 1, 1, 1])
        self.assertEqual([c for c, _ in windings], [g.zero_lattice(p, 3 - p) for p in range(4)])

    def test_count_requires_regime_ii(self):
        with self.assertRaises(RegimeError):
            count_zeros_on_level(evaluator(2.0, Regime.I), 1)

    def test_no_zeros_below_real_axis(self):
        zeros, poles = lower_strip_scan(evaluator(1j))
        self.assertEqual(zeros, 0)

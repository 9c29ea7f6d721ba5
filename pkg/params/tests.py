# params/tests.py

import cmath
import math

import numpy as np
from django.test import SimpleTestCase

from .models import (
    Regime,
    RegimeError,
    SpinConvention,
    central_charge,
    central_charge_window,
    discrete_spin,
    dual,
    params_from_tau,
    regime_ii_from_angle,
    spin_from_a,
)
from .serializers import params_payload


class ParamsFromTauTests(SimpleTestCase):

    def test_regime_i_tau_four(self):
        p = params_from_tau(4, Regime.I)
        self.assertAlmostEqual(p.omega, 0.25j, delta=1e-15)
        self.assertAlmostEqual(p.omega_p, 1j, delta=1e-15)
        self.assertAlmostEqual(p.omega_pp, 1.25j, delta=1e-15)
        self.assertAlmostEqual(p.mu, 1.25, delta=1e-15)

    def test_regime_i_symmetric_point(self):
        p = params_from_tau(1, Regime.I)
        self.assertAlmostEqual(p.omega, 0.5j, delta=1e-15)
        self.assertAlmostEqual(p.omega_p, 0.5j, delta=1e-15)
        self.assertAlmostEqual(p.omega_pp, 1j, delta=1e-15)

    def test_regime_ii_tau_i(self):
        p = params_from_tau(1j, Regime.II)
        r = math.sqrt(2) / 4
        self.assertAlmostEqual(p.omega, complex(r, r), delta=1e-15)
        self.assertAlmostEqual(p.omega_p, complex(-r, r), delta=1e-15)
        self.assertAlmostEqual(p.omega_pp, 1j * math.sqrt(2) / 2, delta=1e-15)
        self.assertAlmostEqual(p.mu, math.sqrt(2) / 2, delta=1e-15)
        self.assertEqual(p.omega.conjugate(), -p.omega_p)

    def test_rejects_off_locus(self):
        with self.assertRaises(RegimeError):
            params_from_tau(-2, Regime.I)
        with self.assertRaises(RegimeError):
            params_from_tau(1 + 0.5j, Regime.I)
        with self.assertRaises(RegimeError):
            params_from_tau(2j, Regime.II)
        with self.assertRaises(RegimeError):
            params_from_tau(cmath.exp(-0.4j), Regime.II)

    def test_rejects_degenerate_regime_ii(self):
        for tau in (1, -1):
            with self.assertRaises(RegimeError):
                params_from_tau(tau, Regime.II)

    def test_random_regime_ii_invariants(self):
        rng = np.random.default_rng(7)
        for theta in rng.uniform(0.0, math.pi, 100):
            if theta < 1e-9 or math.pi - theta < 1e-9:
                continue
            p = params_from_tau(cmath.exp(1j * theta), Regime.II)
            self.assertTrue(p.satisfies_invariants(1e-12), p.invariant_defects())
            self.assertGreater(p.mu, 0)
            self.assertAlmostEqual(abs(p.tau), 1.0, delta=1e-14)

    def test_random_regime_i_invariants(self):
        rng = np.random.default_rng(11)
        for tau in rng.uniform(0.1, 10.0, 100):
            p = params_from_tau(tau, Regime.I)
            self.assertTrue(p.satisfies_invariants(1e-12), p.invariant_defects())
            self.assertAlmostEqual(p.tau.real, tau, delta=1e-13)

    def test_angle_entry(self):
        p = regime_ii_from_angle(60)
        self.assertAlmostEqual(p.tau, cmath.exp(1j * math.pi / 3), delta=1e-14)
        self.assertAlmostEqual(p.mu, math.cos(math.pi / 6), delta=1e-14)


class DualTests(SimpleTestCase):

    def test_dual_of_tau_four(self):
        p = dual(params_from_tau(4, Regime.I))
        self.assertAlmostEqual(p.tau, 0.25, delta=1e-15)
        self.assertAlmostEqual(p.omega, 1j, delta=1e-15)
        self.assertAlmostEqual(p.omega_p, 0.25j, delta=1e-15)

    def test_dual_is_an_involution(self):
        for p in (params_from_tau(1j, Regime.II), params_from_tau(2.5, Regime.I), regime_ii_from_angle(72)):
            self.assertEqual(dual(dual(p)), p)

    def test_dual_swaps_q(self):
        p = regime_ii_from_angle(60)
        d = dual(p)
        self.assertEqual(d.q, p.q_tilde)
        self.assertEqual(d.q_tilde, p.q)
        self.assertAlmostEqual(d.q, cmath.exp(1j * math.pi * d.tau), delta=1e-12)
        self.assertAlmostEqual(d.q, cmath.exp(1j * math.pi / p.tau), delta=1e-12)


class SpinTests(SimpleTestCase):

    def test_discrete_spin_sec3(self):
        p = params_from_tau(1j, Regime.II)
        s = discrete_spin(p, 1, SpinConvention.SEC3)
        self.assertAlmostEqual(s.a, 1j * math.sqrt(2) / 2, delta=1e-15)
        self.assertAlmostEqual(s.Z, cmath.exp(-1j * math.pi * s.a / p.omega), delta=1e-12)
        self.assertEqual(s.n, 1)

    def test_conjugation_relation_in_regime_ii(self):
        p = regime_ii_from_angle(50)
        for convention in SpinConvention:
            for n in (1, 2, 3):
                s = discrete_spin(p, n, convention)
                self.assertAlmostEqual(abs(s.Z.conjugate() * s.Z_tilde - 1), 0, delta=1e-12)
            generic = spin_from_a(p, 0.37j, convention)
            self.assertAlmostEqual(abs(generic.Z.conjugate() * generic.Z_tilde - 1), 0, delta=1e-12)

    def test_sec2_convention(self):
        p = params_from_tau(3, Regime.I)
        s = spin_from_a(p, 0.4, SpinConvention.SEC2)
        self.assertAlmostEqual(s.Z, cmath.exp(1j * math.pi * 0.4 / p.omega), delta=1e-12)
        self.assertAlmostEqual(s.Z_tilde, cmath.exp(1j * math.pi * 0.4 / p.omega_p), delta=1e-12)
        # real spin in Regime I gives a real positive Z
        self.assertAlmostEqual(s.Z.imag, 0, delta=1e-12)
        self.assertGreater(s.Z.real, 0)

    def test_rejects_nonpositive_n(self):
        p = params_from_tau(1j, Regime.II)
        for n in (0, -2, 1.5):
            with self.assertRaises(ValueError):
                discrete_spin(p, n)


class CentralChargeTests(SimpleTestCase):

    def test_values(self):
        self.assertAlmostEqual(central_charge(1), 25)
        self.assertAlmostEqual(central_charge(1j), 13)
        self.assertAlmostEqual(central_charge(4), 38.5)

    def test_zero_rejected(self):
        with self.assertRaises(ValueError):
            central_charge(0)

    def test_regime_windows(self):
        rng = np.random.default_rng(3)
        for tau in rng.uniform(0.1, 10.0, 100):
            c = central_charge(tau)
            self.assertAlmostEqual(c.imag, 0, delta=1e-12)
            self.assertGreaterEqual(c.real, 25)
        low, high = central_charge_window(Regime.II)
        for theta in rng.uniform(0.01, math.pi - 0.01, 100):
            c = central_charge(cmath.exp(1j * theta))
            self.assertAlmostEqual(c.real, 13 + 12 * math.cos(theta), delta=1e-10)
            self.assertTrue(low < c.real < high)


class SerializerTests(SimpleTestCase):

    def test_payload_fields(self):
        p = params_from_tau(1j, Regime.II)
        payload = params_payload(p, discrete_spin(p, 2))
        for key in ('regime', 'tau', 'omega', 'omega_p', 'q', 'mu', 'a', 'Z', 'convention'):
            self.assertIn(key, payload)
        self.assertEqual(payload['regime'], 'II')
        self.assertEqual(payload['convention'], 'Sec3')
        self.assertEqual(len(payload['tau']), 2)
        self.assertAlmostEqual(payload['tau'][1], 1.0, delta=1e-15)

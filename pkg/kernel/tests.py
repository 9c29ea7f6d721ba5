# kernel/tests.py

import cmath
import math

import numpy as np
from django.test import SimpleTestCase

from params.models import Regime, RegimeError, SpinConvention, params_from_tau, spin_from_a

from .domains import decompose_domains, locate_zero_lines, positivity_scan
from .identities import (
    DenominatorGuardError,
    dual_e_identity_residual,
    dual_k_identity_residual,
    e_identity_residual,
    identity_grid,
    k_identity_residual,
    peq_residuals,
)
from .weights import (
    WeightSpec,
    WeightVariant,
    kernel_S,
    measured_reduction_constant,
    phi_gamma,
    phi_product,
    phi_profile,
    reduction_constant,
    sine_square_form,
)

HEXAGONAL = cmath.exp(1j * math.pi / 3)


def regime_ii(tau=HEXAGONAL):
    return params_from_tau(tau, Regime.II)


def probe_points(rng, count):
    return rng.uniform(-1, 1, count) + 1j * rng.uniform(-1, 1, count)


class PhiProductTests(SimpleTestCase):

    def test_trivial_weight(self):
        p = regime_ii()
        for t in (0, 0.3 - 0.2j, 5j):
            self.assertEqual(phi_product(t, 1, p), 1)

    def test_vanishes_on_zero_line(self):
        p = regime_ii()
        self.assertLess(abs(phi_product(-2 * p.omega_pp, 3, p)), 1e-12)

    def test_nonnegative_on_imaginary_axis(self):
        p = regime_ii(1j)
        value = phi_product(0.37j * p.mu, 2, p)
        self.assertAlmostEqual(value.imag, 0, delta=1e-12)
        self.assertGreaterEqual(value.real, 0)

    def test_sine_square_form(self):
        p = regime_ii()
        ys = np.linspace(-3, 3, 41) * p.mu
        for n in (2, 3):
            product = phi_product(1j * ys, n, p)
            squares = sine_square_form(1j * ys, n, p)
            self.assertLess(np.max(np.abs(product - squares) / np.maximum(np.abs(squares), 1)), 1e-10)

    def test_rejects_bad_n(self):
        with self.assertRaises(ValueError):
            phi_product(0.1, 0, regime_ii())


class PhiGammaTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.params = regime_ii()
        cls.spec = WeightSpec.generic(cls.params, 1.3 * cls.params.omega_pp)

    def test_shift_equations(self):
        r1, r2 = peq_residuals(0.1 + 0.2j, self.spec)
        self.assertLess(r1, 1e-8)
        self.assertLess(r2, 1e-8)

    def test_printed_form_misses_shift_equations(self):
        printed = WeightSpec.generic(
            self.params, self.spec.a, variant=WeightVariant.GAMMA_PRINTED, qdilog=self.spec.qdilog
        )
        t = 0.1 + 0.2j
        self.assertGreater(peq_residuals(t, printed)[0], 1e-3)
        expected = cmath.exp(2j * math.pi * (self.spec.a - self.params.omega_pp) * t)
        self.assertAlmostEqual(abs(printed.phi(t) / self.spec.phi(t) - expected), 0, delta=1e-8 * abs(expected))

    def test_zero_of_numerator(self):
        t = 2 * self.params.omega_pp - 2 * self.spec.a
        nearby = abs(self.spec.phi(t + 0.05 * self.params.mu))
        self.assertLess(abs(self.spec.phi(t)), 1e-8 * nearby)

    def test_reduction_to_product(self):
        p = regime_ii()
        for n in (1, 2, 3):
            measured, spread = measured_reduction_constant(p, n)
            self.assertLess(spread, 1e-6)
            expected = reduction_constant(n, p)
            self.assertLess(abs(measured - expected), 1e-6 * abs(expected))

    def test_reduction_constant_n1(self):
        p = regime_ii(1j)
        self.assertAlmostEqual(reduction_constant(1, p), cmath.exp(4j * math.pi * p.omega_pp), delta=1e-14)

    def test_qdilog_shared(self):
        qd = self.spec.qdilog
        self.assertEqual(phi_gamma(0.1 + 0.2j, self.spec.a, qd), self.spec.phi(0.1 + 0.2j))


class KernelTests(SimpleTestCase):

    def test_diagonal(self):
        spec = WeightSpec.discrete(regime_ii(), 2)
        z = 0.3 + 0.4j
        self.assertAlmostEqual(kernel_S(z, z, spec), phi_product(0, 2, spec.params), delta=1e-12)

    def test_trivial_weight_is_gaussian(self):
        spec = WeightSpec.discrete(regime_ii(), 1)
        w, z = 0.2 - 0.1j, -0.4 + 0.3j
        self.assertAlmostEqual(kernel_S(w, z, spec), cmath.exp(1j * math.pi * (z * z - w * w)), delta=1e-14)

    def test_real_axis(self):
        spec = WeightSpec.discrete(regime_ii(), 3)
        value = kernel_S(0.7, 0.7, spec)
        self.assertAlmostEqual(value, phi_product(0, 3, spec.params), delta=1e-12)


class IdentityTests(SimpleTestCase):

    w, z = 0.1 - 0.3j, 0.2 + 0.1j

    def test_k_identity(self):
        p = regime_ii()
        self.assertLess(k_identity_residual(self.w, self.z, WeightSpec.discrete(p, 2)), 1e-8)
        self.assertLess(k_identity_residual(self.w, self.z, WeightSpec.discrete(p, 1)), 1e-12)
        self.assertLess(k_identity_residual(self.w, self.z, WeightSpec.generic(p, 1.5 * p.omega_pp)), 1e-8)

    def test_e_identity(self):
        p = regime_ii()
        spec = WeightSpec.discrete(p, 2)
        self.assertLess(e_identity_residual(self.w, self.z, spec), 1e-8)
        trivial = WeightSpec.discrete(p, 1)
        self.assertAlmostEqual(trivial.Z, cmath.exp(-1j * math.pi * p.omega_pp / p.omega), delta=1e-14)
        self.assertLess(e_identity_residual(self.w, self.z, trivial), 1e-10)

    def test_dual_identities(self):
        p = regime_ii()
        for spec in (WeightSpec.discrete(p, 2), WeightSpec.generic(p, 0.8 * p.omega_pp)):
            self.assertLess(dual_k_identity_residual(self.w, self.z, spec), 1e-8)
            self.assertLess(dual_e_identity_residual(self.w, self.z, spec), 1e-8)

    def test_spin_sign_convention(self):
        p = regime_ii()
        n = 2
        wrong = WeightSpec.discrete(p, n, SpinConvention.SEC2)
        self.assertGreater(e_identity_residual(self.w, self.z, wrong), 1e-3)
        mirrored = WeightSpec(
            WeightVariant.PRODUCT, p, spin_from_a(p, -n * p.omega_pp, SpinConvention.SEC2), n=n
        )
        self.assertLess(e_identity_residual(self.w, self.z, mirrored), 1e-8)

    def test_identity_grid(self):
        rng = np.random.default_rng(17)
        p = regime_ii()
        ws, zs = probe_points(rng, 20), probe_points(rng, 20)
        for n in (1, 2, 3):
            spec = WeightSpec.discrete(p, n)
            for w in ws:
                for z in zs:
                    self.assertLess(k_identity_residual(w, z, spec), 1e-8)
                    self.assertLess(e_identity_residual(w, z, spec), 1e-8)

    def test_identity_grid_rows(self):
        spec = WeightSpec.discrete(regime_ii(), 2)
        rows = identity_grid(spec, 'e_dual', [(self.w, self.z)])
        self.assertEqual(rows[0][:4], (0.1, -0.3, 0.2, 0.1))
        self.assertLess(rows[0][4], 1e-8)


class ShiftEquationTests(SimpleTestCase):

    def test_examples(self):
        p = regime_ii()
        for r in peq_residuals(0.15 + 0.05j, WeightSpec.discrete(p, 3)):
            self.assertLess(r, 1e-8)
        for r in peq_residuals(0.15 + 0.05j, WeightSpec.generic(p, 0.7 * p.omega_pp)):
            self.assertLess(r, 1e-8)
        for r in peq_residuals(0.4 - 0.3j, WeightSpec.discrete(p, 1)):
            self.assertLess(r, 1e-12)

    def test_denominator_guard(self):
        p = regime_ii()
        with self.assertRaises(DenominatorGuardError):
            peq_residuals(-2 * p.omega_pp, WeightSpec.discrete(p, 2))

    def test_discrete_probe_points(self):
        rng = np.random.default_rng(23)
        for tau in (1j, HEXAGONAL):
            p = regime_ii(tau)
            for n in (1, 2, 3, 4):
                spec = WeightSpec.discrete(p, n)
                for t in probe_points(rng, 100):
                    r1, r2 = peq_residuals(t, spec)
                    self.assertLess(max(r1, r2), 1e-8, f"tau={tau} n={n} t={t}")

    def test_generic_probe_points(self):
        rng = np.random.default_rng(29)
        for tau in (1j, HEXAGONAL):
            p = regime_ii(tau)
            for k in (0.5, 1.5, 2.5):
                spec = WeightSpec.generic(p, k * p.omega_pp)
                for t in probe_points(rng, 100):
                    r1, r2 = peq_residuals(t, spec)
                    self.assertLess(max(r1, r2), 1e-8, f"tau={tau} a={k}omega_pp t={t}")


class DomainTests(SimpleTestCase):

    def test_single_region(self):
        d = decompose_domains(1, regime_ii())
        self.assertEqual(d.levels, [])
        self.assertEqual(d.regions, [(-math.inf, math.inf)])

    def test_three_regions(self):
        p = regime_ii(1j)
        d = decompose_domains(3, p)
        r = math.sqrt(2) / 2
        self.assertEqual(len(d.regions), 3)
        self.assertAlmostEqual(d.levels[0], r, delta=1e-15)
        self.assertAlmostEqual(d.levels[1], 2 * r, delta=1e-15)
        for y in d.levels:
            self.assertLess(abs(phi_product(-2j * y, 3, p)), 1e-12)
        self.assertEqual(d.region_of(0.0), 1)
        self.assertEqual(d.region_of(1.5 * r), 2)
        self.assertEqual(d.region_of(5.0), 3)
        self.assertIsNone(d.region_of(d.levels[0]))

    def test_two_half_planes(self):
        p = regime_ii()
        d = decompose_domains(2, p)
        self.assertEqual(d.levels, [p.mu])
        self.assertEqual(d.regions, [(-math.inf, p.mu), (p.mu, math.inf)])

    def test_requires_regime_ii(self):
        with self.assertRaises(RegimeError):
            decompose_domains(2, params_from_tau(2.0, Regime.I))

    def test_located_lines_match_levels(self):
        for tau in (1j, HEXAGONAL):
            p = regime_ii(tau)
            d = decompose_domains(4, p)
            for found, level in zip(locate_zero_lines(4, p), d.levels):
                self.assertAlmostEqual(found, level, delta=1e-8)

    def test_located_lines_for_many_regions(self):
        p = regime_ii(1j)
        found = locate_zero_lines(6, p)
        self.assertEqual(len(found), 5)
        for m, y in enumerate(found, start=1):
            self.assertAlmostEqual(y, m * p.mu, delta=1e-8)
            self.assertLess(abs(phi_product(-2j * y, 6, p)), 1e-6 * abs(phi_product(-2j * (m + 0.2) * p.mu, 6, p)))


class PositivityTests(SimpleTestCase):

    def test_regime_ii_is_nonnegative(self):
        report = positivity_scan(2, regime_ii(), samples=1000)
        self.assertTrue(report.nonnegative)
        self.assertLess(report.max_imag_ratio, 1e-10)
        self.assertLess(report.max_square_form_defect, 1e-10)

    def test_imaginary_part_is_absolute_where_phi_is_small(self):
        p = regime_ii()
        report = positivity_scan(2, p, samples=400, extent=3.0)
        values = phi_product(1j * np.linspace(-3.0, 3.0, 400) * p.mu, 2, p)
        small = np.abs(values) <= 1.0
        self.assertTrue(small.any())
        self.assertLess(float(np.abs(values.imag[small]).max()), 1e-10)
        self.assertLessEqual(float(np.abs(values.imag[small]).max()), report.max_imag_ratio)

    def test_regime_ii_higher_n(self):
        for n in (3, 4):
            self.assertTrue(positivity_scan(n, regime_ii(1j)).nonnegative)

    def test_regime_i_changes_sign(self):
        report = positivity_scan(2, params_from_tau(2.0, Regime.I), samples=1000)
        self.assertLess(report.min_value, -1e-3)


class ProfileTests(SimpleTestCase):

    def test_rows(self):
        spec = WeightSpec.discrete(regime_ii(1j), 2)
        rows = phi_profile(spec, [0.0, spec.params.mu])
        self.assertEqual(len(rows), 2)
        self.assertEqual(rows[1][0], spec.params.mu)
        self.assertLess(abs(rows[1][1]), 1e-12)

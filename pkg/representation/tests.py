# representation/tests.py

import cmath
import math

import numpy as np
from django.test import SimpleTestCase

from kernel.weights import WeightSpec
from params.models import Regime, RegimeError, discrete_spin, params_from_tau

from .functions import GEPFunction, centered_basis, random_gep
from .operators import OperatorName, adjoint_name, apply, casimir_residual, compose, operator, operator_residuals
from .quadrature import (
    DomainSpec,
    QuadratureError,
    continuous_series_check,
    gram_matrix,
    hermiticity_residual,
    inner_product,
    region_domain,
)

HEXAGONAL = cmath.exp(1j * math.pi / 3)


def sample_points(rng, count=10):
    return rng.uniform(-1, 1, count) + 1j * rng.uniform(-1, 1, count)


def middle_strip(x_extent=5.0, nx=160, ny=48):
    params = params_from_tau(HEXAGONAL, Regime.II)
    spec = WeightSpec.discrete(params, 3)
    dom = region_domain(params, 3, 2, x_extent=x_extent, y_pad=2.0, nx=nx, ny=ny)
    return params, spec, dom


class GEPFunctionTests(SimpleTestCase):

    def test_merges_equal_terms(self):
        f = GEPFunction(1.0, [(1, 0.5j, 2), (2, 0.5j, 2), (1, 0, 0)])
        self.assertEqual(len(f.terms), 2)
        self.assertEqual(f.terms[0][0], 3)

    def test_drops_cancelled_terms(self):
        f = GEPFunction.gaussian(1.0, 0.3)
        self.assertEqual((f - f).terms, [])

    def test_rejects_bad_width_and_power(self):
        with self.assertRaises(ValueError):
            GEPFunction(0.0)
        with self.assertRaises(ValueError):
            GEPFunction(1.0, [(1, 0, -1)])

    def test_evaluation(self):
        f = GEPFunction(1.0, [(2, 1j, 1)])
        z = 0.3 - 0.4j
        self.assertAlmostEqual(f(z), 2 * cmath.exp(-z * z + 1j * z) * z, places=14)
        values = f(np.array([z, 0]))
        self.assertEqual(values.shape, (2,))
        self.assertEqual(values[1], 0)

    def test_shift_matches_pointwise(self):
        rng = np.random.default_rng(3)
        f = random_gep(rng, max_power=4)
        h = 0.7 - 0.2j
        shifted = f.shift(h)
        for z in sample_points(rng):
            self.assertLess(abs(shifted(z) - f(z + h)), 1e-12 * max(1.0, f.magnitude(z + h)))

    def test_conjugate(self):
        rng = np.random.default_rng(4)
        f = random_gep(rng)
        z = 0.2 + 0.9j
        self.assertAlmostEqual(f.conjugate()(z), f(z.conjugate()).conjugate(), places=12)

    def test_width_mismatch(self):
        with self.assertRaises(ValueError):
            GEPFunction.gaussian(1.0) + GEPFunction.gaussian(2.0)

    def test_centered_basis(self):
        basis = centered_basis(4, 0.5, sigma=2.0)
        self.assertEqual([b.terms[0][2] for b in basis], [0, 1, 2, 3])
        self.assertEqual(basis[0].terms[0][1], complex(math.pi, 2.0))


class OperatorTests(SimpleTestCase):

    def setUp(self):
        self.params = params_from_tau(1j, Regime.II)
        self.spin = discrete_spin(self.params, 2)

    def test_u_shifts_beta(self):
        f = GEPFunction.gaussian(1.0)
        uf = apply(operator('u', self.params), f)
        self.assertEqual(len(uf.terms), 1)
        self.assertAlmostEqual(uf.terms[0][1], -1j * math.pi / self.params.omega, places=14)

    def test_tilde_names(self):
        self.assertTrue(OperatorName.E_T.is_tilde)
        self.assertEqual(OperatorName.K_T_INV.base, OperatorName.K_INV)
        self.assertFalse(OperatorName.C.is_tilde)

    def test_conjugation_table(self):
        self.assertEqual(adjoint_name('u'), '~u')
        self.assertEqual(adjoint_name('~v'), 'v')
        self.assertEqual(adjoint_name('~K'), 'K')
        with self.assertRaises(KeyError):
            adjoint_name('C')

    def test_spin_required(self):
        with self.assertRaises(ValueError):
            apply(operator('E', self.params), GEPFunction.gaussian(1.0))

    def test_v_then_inverse(self):
        rng = np.random.default_rng(5)
        f = random_gep(rng)
        back = compose(f, operator('v^-1', self.params), operator('v', self.params))
        self.assertTrue(back.is_close(f))

    def test_exact_linearity(self):
        rng = np.random.default_rng(6)
        f, g = random_gep(rng), random_gep(rng)
        a, b = 0.3 - 1.1j, 2.0 + 0.5j
        for name in ('u', 'v', 'K', 'E', 'F', '~E', 'C'):
            op = operator(name, self.params, self.spin)
            lhs = apply(op, f * a + g * b)
            rhs = apply(op, f) * a + apply(op, g) * b
            self.assertTrue(lhs.is_close(rhs, tol=1e-12), name)

    def test_weyl_relation_example(self):
        rng = np.random.default_rng(7)
        f = GEPFunction.gaussian(1.0)
        uv = compose(f, operator('u', self.params), operator('v', self.params))
        vu = compose(f, operator('v', self.params), operator('u', self.params))
        z = sample_points(rng)
        self.assertLess(np.max(np.abs(uv(z) - vu(z) * self.params.q ** 2)), 1e-12 * np.max(uv.magnitude(z)))

    def test_euler_commutativity_example(self):
        rng = np.random.default_rng(8)
        f = GEPFunction.gaussian(1.0, 0.2j, 1)
        ut_v = compose(f, operator('~u', self.params), operator('v', self.params))
        v_ut = compose(f, operator('v', self.params), operator('~u', self.params))
        z = sample_points(rng)
        self.assertLess(np.max(np.abs(ut_v(z) - v_ut(z))), 1e-12 * np.max(ut_v.magnitude(z)))

    def test_casimir_examples(self):
        rng = np.random.default_rng(9)
        z = sample_points(rng)
        for f in (GEPFunction.gaussian(1.0), GEPFunction.gaussian(1.0, k=3)):
            self.assertLess(casimir_residual(f, self.params, self.spin, z), 1e-10)
        origin = np.array([0.0])
        self.assertLess(casimir_residual(GEPFunction.gaussian(1.0), self.params, self.spin, origin), 1e-10)

    def test_all_relations_on_random_functions(self):
        rng = np.random.default_rng(10)
        for tau in (1j, HEXAGONAL):
            params = params_from_tau(tau, Regime.II)
            for n in (1, 2, 3):
                spin = discrete_spin(params, n)
                f = random_gep(rng)
                residuals = operator_residuals(f, params, spin, sample_points(rng))
                for name, value in residuals.items():
                    self.assertLess(value, 1e-10, f"{name} tau={tau} n={n}")

    def test_relations_in_regime_one(self):
        rng = np.random.default_rng(11)
        params = params_from_tau(2.5, Regime.I)
        spin = discrete_spin(params, 1)
        residuals = operator_residuals(random_gep(rng), params, spin, sample_points(rng))
        self.assertLess(max(residuals.values()), 1e-10)

    def test_casimir_when_central_value_vanishes(self):
        params = params_from_tau(2.5, Regime.I)
        spin = discrete_spin(params, 1)
        self.assertLess(abs(spin.Z + 1 / spin.Z), 1e-12)
        rng = np.random.default_rng(5)
        points = sample_points(rng)
        for f in (GEPFunction.gaussian(1.0), random_gep(rng)):
            self.assertLess(casimir_residual(f, params, spin, points), 1e-10)


class DomainSpecTests(SimpleTestCase):

    def test_middle_strip_bounds(self):
        params, _, dom = middle_strip()
        self.assertTrue(dom.bounded)
        self.assertAlmostEqual(dom.y_lo, params.mu, places=14)
        self.assertAlmostEqual(dom.y_hi, 2 * params.mu, places=14)

    def test_half_planes_use_pad(self):
        params = params_from_tau(HEXAGONAL, Regime.II)
        lower = region_domain(params, 3, 1, 5.0, 1.5, 16, 16)
        upper = region_domain(params, 3, 3, 5.0, 1.5, 16, 16)
        self.assertFalse(lower.bounded)
        self.assertAlmostEqual(lower.y_lo, params.mu - 1.5, places=14)
        self.assertAlmostEqual(upper.y_hi, 2 * params.mu + 1.5, places=14)

    def test_whole_plane(self):
        params = params_from_tau(1j, Regime.II)
        dom = region_domain(params, 1, 1, 5.0, 0.5, 16, 16)
        self.assertEqual((dom.y_lo, dom.y_hi), (-0.5, 0.5))

    def test_validation(self):
        params = params_from_tau(1j, Regime.II)
        with self.assertRaises(ValueError):
            region_domain(params, 3, 4, 5.0, 1.0, 16, 16)
        with self.assertRaises(ValueError):
            region_domain(params, 3, 2, 5.0, 1.0, 4, 16)
        with self.assertRaises(RegimeError):
            region_domain(params_from_tau(4.0, Regime.I), 3, 2, 5.0, 1.0, 16, 16)
        with self.assertRaises(ValueError):
            DomainSpec(n=1, index=1, y_lo=0.5, y_hi=0.5, x_extent=5.0, y_pad=1.0, nx=16, ny=16, bounded=True)


class InnerProductTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.params, cls.spec, cls.dom = middle_strip()
        cls.basis = centered_basis(3, cls.dom.y_center)

    def test_zero(self):
        zero = GEPFunction(1.0)
        self.assertEqual(inner_product(zero, zero, self.dom, self.spec), 0)

    def test_conjugate_symmetry(self):
        f, g = self.basis[0], self.basis[1] * (0.5 + 1j) + self.basis[2]
        fg = inner_product(f, g, self.dom, self.spec)
        gf = inner_product(g, f, self.dom, self.spec)
        self.assertLess(abs(fg - gf.conjugate()), 1e-10 * abs(fg))

    def test_sesquilinearity(self):
        f, g, h = self.basis
        a, b = 1.5 - 0.5j, -0.25j
        lhs = inner_product(f, g * a + h * b, self.dom, self.spec)
        rhs = a * inner_product(f, g, self.dom, self.spec) + b * inner_product(f, h, self.dom, self.spec)
        self.assertLess(abs(lhs - rhs), 1e-12 * (abs(lhs) + abs(rhs)))

    def test_norm_positive(self):
        norm = inner_product(self.basis[0], self.basis[0], self.dom, self.spec)
        self.assertGreater(norm.real, 0)
        self.assertLess(abs(norm.imag), 1e-10 * norm.real)

    def test_converges_under_node_doubling(self):
        f, g = self.basis[0], self.basis[1]
        _, _, fine = middle_strip(nx=320, ny=96)
        coarse_value = inner_product(f, g, self.dom, self.spec)
        fine_value = inner_product(f, g, fine, self.spec)
        self.assertLess(abs(coarse_value - fine_value), 1e-8 * abs(fine_value))

    def test_non_finite_integrand(self):
        huge = GEPFunction.gaussian(1.0, 800.0)
        with self.assertRaises(QuadratureError):
            inner_product(huge, huge, self.dom, self.spec)


class HermiticityTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.params, cls.spec, cls.dom = middle_strip()
        basis = centered_basis(2, cls.dom.y_center)
        cls.f = basis[0]
        cls.g = basis[0] * 0.5j + basis[1]

    def test_k_pair_within_tolerance_and_converging(self):
        r5 = hermiticity_residual(('~K', 'K'), self.f, self.g, self.dom, self.spec)
        _, _, wide = middle_strip(x_extent=7.0)
        r7 = hermiticity_residual(('~K', 'K'), self.f, self.g, wide, self.spec)
        self.assertLess(r5, 1e-3)
        self.assertTrue(r7 <= r5 / 10 or r7 < 1e-9, (r5, r7))

    def test_e_and_f_pairs_stay_order_one_as_the_window_grows(self):
        _, _, wide = middle_strip(x_extent=7.0)
        for pair in (('~E', 'E'), ('~F', 'F')):
            r5 = hermiticity_residual(pair, self.f, self.g, self.dom, self.spec)
            r7 = hermiticity_residual(pair, self.f, self.g, wide, self.spec)
            self.assertGreater(r5, 0.9, pair)
            self.assertLess(r5, 1.1, pair)
            self.assertLess(abs(r7 - r5), 0.05, pair)

    def test_e_and_f_pairs_reported(self):
        for pair in (('~E', 'E'), ('~F', 'F'), ('E', '~E'), ('F', '~F')):
            residual = hermiticity_residual(pair, self.f, self.g, self.dom, self.spec)
            self.assertTrue(math.isfinite(residual), pair)
            self.assertGreaterEqual(residual, 0)

    def test_unsupported_pair(self):
        with self.assertRaises(ValueError):
            hermiticity_residual(('K', '~K'), self.f, self.g, self.dom, self.spec)


class GramTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.params, cls.spec, cls.dom = middle_strip()

    def test_single_element(self):
        report = gram_matrix(centered_basis(1, self.dom.y_center), self.dom, self.spec)
        self.assertEqual(report.matrix.shape, (1, 1))
        self.assertLess(abs(report.matrix[0, 0].imag), 1e-10 * abs(report.matrix[0, 0]))

    def test_positivity_evidence(self):
        report = gram_matrix(centered_basis(8, self.dom.y_center), self.dom, self.spec)
        self.assertTrue(report.positive(1e-6), report.eigenvalues)
        self.assertLess(report.hermitian_defect, 1e-10)
        self.assertGreater(report.max_eigenvalue, 0)

    def test_congruent_scaling(self):
        basis = centered_basis(3, self.dom.y_center)
        scales = (2.0, 0.5j, -3.0)
        plain = gram_matrix(basis, self.dom, self.spec)
        scaled = gram_matrix([b * c for b, c in zip(basis, scales)], self.dom, self.spec)
        d = np.diag(scales)
        expected = d.conj().T @ plain.matrix @ d
        self.assertLess(np.max(np.abs(scaled.matrix - expected)), 1e-12 * np.max(np.abs(expected)))
        self.assertEqual(np.sign(scaled.min_eigenvalue), np.sign(plain.min_eigenvalue))

    def test_size_limit(self):
        with self.assertRaises(ValueError):
            gram_matrix(centered_basis(33, self.dom.y_center), self.dom, self.spec)
        with self.assertRaises(ValueError):
            gram_matrix([], self.dom, self.spec)


class ContinuousSeriesTests(SimpleTestCase):

    def setUp(self):
        self.params = params_from_tau(4.0, Regime.I)

    def test_gaussian_adjoint_residuals(self):
        f = GEPFunction.gaussian(1.0)
        report = continuous_series_check(self.params, f, f)
        for name in ('u', 'v', '~u', '~v'):
            self.assertLess(report.residuals[name], 1e-8, name)
        self.assertTrue(report.u_positive)

    def test_random_functions(self):
        rng = np.random.default_rng(12)
        f, g = random_gep(rng), random_gep(rng)
        report = continuous_series_check(self.params, f, g)
        self.assertLess(max(report.residuals.values()), 1e-8)

    def test_regime_two_rejected(self):
        f = GEPFunction.gaussian(1.0)
        with self.assertRaises(RegimeError):
            continuous_series_check(params_from_tau(1j, Regime.II), f, f)

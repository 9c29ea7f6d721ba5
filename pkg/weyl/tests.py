# weyl/tests.py

import numpy as np
from django.test import SimpleTestCase
from sympy import QQ_I

from .algebra import (
    I,
    AlgebraElement,
    QField,
    build_generators,
    casimir,
    casimir_residual,
    coefficient,
    commutator,
    multiply,
    pretty,
    q,
    relation_residuals,
    symbolic_report,
)


def random_coefficient(rng):
    re = int(rng.integers(-5, 6))
    im = int(rng.integers(-5, 6))
    scalar = QField(QQ_I(re, im)) / int(rng.integers(1, 4))
    return scalar * q ** int(rng.integers(-2, 3))


def random_element(rng, size=3):
    terms = {}
    for _ in range(size):
        mono = tuple(int(e) for e in rng.integers(-2, 3, size=3))
        terms[mono] = random_coefficient(rng)
    return AlgebraElement(terms)


class CoefficientFieldTests(SimpleTestCase):

    def test_imaginary_unit_squares_to_minus_one(self):
        self.assertEqual(I * I, coefficient(-1))

    def test_division_is_exact(self):
        x = q + 1 + 2 * I
        y = q + (q - 3) * I
        self.assertEqual((x / y) * y, x)

    def test_division_by_zero(self):
        with self.assertRaises(ZeroDivisionError):
            coefficient(1) / QField.zero

    def test_common_factors_cancel(self):
        self.assertEqual((q ** 2 + 1) / (q + I), q - I)


class MultiplyTests(SimpleTestCase):

    def setUp(self):
        self.u = AlgebraElement.monomial(1, 0, 0)
        self.v = AlgebraElement.monomial(0, 1, 0)

    def test_weyl_relation(self):
        self.assertEqual(multiply(self.v, self.u), AlgebraElement.monomial(1, 1, 0, q ** -2))
        self.assertEqual(self.u * self.v - (self.v * self.u).scale(q ** 2), 0)

    def test_square_of_uv(self):
        uv = self.u * self.v
        self.assertEqual(uv * uv, AlgebraElement.monomial(2, 2, 0, q ** -2))

    def test_identity(self):
        g = build_generators()
        self.assertEqual(g.E * AlgebraElement.one(), g.E)
        self.assertEqual(AlgebraElement.one() * g.E, g.E)

    def test_associativity(self):
        rng = np.random.default_rng(2024)
        for _ in range(50):
            x, y, z = (random_element(rng) for _ in range(3))
            self.assertTrue(((x * y) * z - x * (y * z)).is_zero)

    def test_distributivity(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            x, y, z = (random_element(rng) for _ in range(3))
            self.assertTrue((x * (y + z) - x * y - x * z).is_zero)

    def test_reordering_by_single_swaps(self):
        u = {1: self.u, -1: AlgebraElement.monomial(-1, 0, 0)}
        v = {1: self.v, -1: AlgebraElement.monomial(0, -1, 0)}
        for a in range(-3, 4):
            for b in range(-3, 4):
                word = AlgebraElement.one()
                for _ in range(abs(b)):
                    word = word * v[int(np.sign(b))]
                for _ in range(abs(a)):
                    word = word * u[int(np.sign(a))]
                expected = AlgebraElement.monomial(a, b, 0, q ** (-2 * a * b))
                self.assertEqual(word, expected, f"a={a} b={b}")

    def test_zero_coefficients_dropped(self):
        x = AlgebraElement.monomial(1, 0, 0) - AlgebraElement.monomial(1, 0, 0)
        self.assertTrue(x.is_zero)
        self.assertEqual(x.terms, {})


class GeneratorTests(SimpleTestCase):

    def test_generator_shapes(self):
        g = build_generators()
        self.assertEqual(set(g.E.terms), {(0, 1, 0), (-1, 0, 1)})
        self.assertEqual(set(g.F.terms), {(1, 0, 0), (0, -1, -1)})
        self.assertEqual(set(g.K.terms), {(1, 1, 0)})
        self.assertEqual(g.K.coefficient(1, 1, 0), q ** -1)

    def test_k_inverse(self):
        g = build_generators()
        self.assertEqual(g.K * g.K_inv, 1)
        self.assertEqual(g.K_inv * g.K, 1)

    def test_relations_vanish_exactly(self):
        for name, residual in relation_residuals().items():
            self.assertTrue(residual.is_zero, f"{name}: {residual}")

    def test_casimir_reduces_to_z(self):
        c = casimir()
        self.assertEqual(set(c.terms), {(0, 0, 1), (0, 0, -1)})
        self.assertEqual(c.coefficient(0, 0, 1), coefficient(-1))
        self.assertEqual(c.coefficient(0, 0, -1), coefficient(-1))
        self.assertTrue(casimir_residual().is_zero)

    def test_casimir_is_central(self):
        g = build_generators()
        c = casimir()
        for x in (g.E, g.F, g.K):
            self.assertTrue(commutator(c, x).is_zero)

    def test_pretty_printing(self):
        self.assertEqual(pretty(casimir()), '-1 · Z^-1 + -1 · Z')
        self.assertEqual(pretty(AlgebraElement()), '0')
        self.assertEqual(pretty(AlgebraElement.monomial(2, -1, 0)), '1 · u^2 v^-1')

    def test_report(self):
        report = symbolic_report()
        self.assertTrue(all(check['zero'] for check in report['checks']))
        self.assertEqual(report['casimir'], '-1 · Z^-1 + -1 · Z')

# weyl/algebra.py

import logging
from dataclasses import dataclass
from functools import lru_cache

from sympy import QQ_I
from sympy.polys.fields import FracElement, field

logger = logging.getLogger(__name__)

# Rational functions of the formal symbol q over the Gaussian rationals
QField, q = field('q', QQ_I)
I = QField(QQ_I(0, 1))
ONE = QField.one


def coefficient(value):
    """Coerce an int, Gaussian rational or field element into QField"""
    return QField(value)


class AlgebraElement:
    """
    Finite sum of normal-ordered monomials u^a v^b Z^c with exact
    coefficients. Keys are exponent triples (a, b, c); zero coefficients
    are never stored.
    """

    def __init__(self, terms=None):
        self.terms = {}
        for mono, coeff in (terms or {}).items():
            coeff = coefficient(coeff)
            if coeff:
                self.terms[tuple(int(e) for e in mono)] = coeff

    @classmethod
    def monomial(cls, a=0, b=0, c=0, coeff=ONE):
        return cls({(a, b, c): coeff})

    @classmethod
    def one(cls):
        return cls.monomial()

    @property
    def is_zero(self):
        return not self.terms

    def coefficient(self, a, b, c):
        return self.terms.get((a, b, c), QField.zero)

    def __neg__(self):
        return AlgebraElement({m: -c for m, c in self.terms.items()})

    def __add__(self, other):
        other = _as_element(other)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = terms.get(mono, QField.zero) + coeff
        return AlgebraElement(terms)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_element(other))

    def __rsub__(self, other):
        return _as_element(other) - self

    def scale(self, coeff):
        coeff = coefficient(coeff)
        return AlgebraElement({m: coeff * c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, (AlgebraElement, FracElement, int)):
            return NotImplemented
        return (self - other).is_zero

    __hash__ = None

    def __repr__(self):
        return f"AlgebraElement({self})"

    def __str__(self):
        return pretty(self)


def _as_element(value):
    if isinstance(value, AlgebraElement):
        return value
    return AlgebraElement.monomial(coeff=coefficient(value))


def multiply(x, y):
    """Normal-ordered product using v^b u^d = q^(-2bd) u^d v^b"""
    terms = {}
    for (a, b, c), cx in x.terms.items():
        for (d, e, f), cy in y.terms.items():
            mono = (a + d, b + e, c + f)
            coeff = q ** (-2 * b * d) * cx * cy
            terms[mono] = terms.get(mono, QField.zero) + coeff
    return AlgebraElement(terms)


def commutator(x, y):
    return x * y - y * x


def _format_power(symbol, exponent):
    if exponent == 0:
        return ''
    if exponent == 1:
        return symbol
    return f"{symbol}^{exponent}"


def pretty(element):
    """Canonical text form 'c · u^a v^b Z^c', terms sorted by exponent triple"""
    if element.is_zero:
        return '0'
    parts = []
    for (a, b, c) in sorted(element.terms):
        word = ' '.join(p for p in (
            _format_power('u', a), _format_power('v', b), _format_power('Z', c)
        ) if p) or '1'
        parts.append(f"{element.terms[(a, b, c)].as_expr()} · {word}")
    return ' + '.join(parts)


@dataclass(frozen=True)
class Generators:
    E: AlgebraElement
    F: AlgebraElement
    K: AlgebraElement
    K_inv: AlgebraElement


def q_scalar():
    """The scalar i/(q - q^-1) in front of E and F"""
    return I / (q - q ** -1)


@lru_cache(maxsize=1)
def build_generators():
    """E = i(v + u^-1 Z)/(q - q^-1), F = i(u + v^-1 Z^-1)/(q - q^-1), K = q^-1 uv"""
    s = q_scalar()
    q_inv = q ** -1
    gens = Generators(
        E=AlgebraElement({(0, 1, 0): s, (-1, 0, 1): s}),
        F=AlgebraElement({(1, 0, 0): s, (0, -1, -1): s}),
        K=AlgebraElement.monomial(1, 1, 0, q_inv),
        K_inv=AlgebraElement.monomial(-1, -1, 0, q_inv),
    )
    logger.debug(f"Built generators E={gens.E}, F={gens.F}, K={gens.K}")
    return gens


def relation_residuals():
    """KE - q^2 EK, KF - q^-2 FK and EF - FE - (K - K^-1)/(q - q^-1)"""
    g = build_generators()
    return {
        'KE': g.K * g.E - (g.E * g.K).scale(q ** 2),
        'KF': g.K * g.F - (g.F * g.K).scale(q ** -2),
        'EF': g.E * g.F - g.F * g.E - (g.K - g.K_inv).scale(ONE / (q - q ** -1)),
    }


def casimir():
    """C = qK + q^-1 K^-1 + (q - q^-1)^2 FE"""
    g = build_generators()
    q_inv = q ** -1
    return g.K.scale(q) + g.K_inv.scale(q_inv) + (g.F * g.E).scale((q - q_inv) ** 2)


def casimir_residual():
    """C + Z + Z^-1, exactly zero in this realization"""
    return casimir() + AlgebraElement.monomial(0, 0, 1) + AlgebraElement.monomial(0, 0, -1)


def symbolic_report():
    """Every exact check keyed by name, with its residual in canonical text form"""
    g = build_generators()
    c = casimir()
    checks = dict(relation_residuals())
    checks['casimir'] = casimir_residual()
    checks['casimir_central_E'] = commutator(c, g.E)
    checks['casimir_central_F'] = commutator(c, g.F)
    checks['casimir_central_K'] = commutator(c, g.K)
    checks['K_inverse'] = g.K * g.K_inv - 1
    report = []
    for name, residual in checks.items():
        report.append({'name': name, 'zero': residual.is_zero, 'residual': pretty(residual)})
        if not residual.is_zero:
            logger.warning(f"Symbolic check {name} left residual {residual}")
    logger.info(f"Symbolic checks: {sum(r['zero'] for r in report)}/{len(report)} exactly zero")
    return {'casimir': pretty(c), 'checks': report}

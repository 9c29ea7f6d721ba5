# representation/quadrature.py

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from kernel.domains import decompose_domains
from params.models import Regime, RegimeError

from .operators import adjoint_name, apply, operator

logger = logging.getLogger(__name__)

MIN_ORDER = 8
MAX_GRAM_SIZE = 32
HERMITICITY_PAIRS = tuple((name, adjoint_name(name)) for name in ('~K', '~E', '~F', 'E', 'F'))


class QuadratureError(ArithmeticError):
    """A quadrature sample of the integrand is not finite"""


@dataclass(frozen=True)
class DomainSpec:
    """Truncated rectangle |x - x_center| <= X, y_lo <= y <= y_hi inside one region"""

    n: int
    index: int
    y_lo: float
    y_hi: float
    x_extent: float
    y_pad: float
    nx: int
    ny: int
    bounded: bool
    x_center: float = 0.0

    def __post_init__(self):
        if min(self.nx, self.ny) < MIN_ORDER:
            raise ValueError(f"Quadrature orders must be at least {MIN_ORDER}, got ({self.nx}, {self.ny})")
        if self.x_extent <= 0 or self.y_hi <= self.y_lo:
            raise ValueError("Empty integration rectangle")

    @property
    def y_center(self):
        return 0.5 * (self.y_lo + self.y_hi)

    def describe(self):
        return {
            'n': self.n,
            'region': self.index,
            'bounded': self.bounded,
            'x': [self.x_center - self.x_extent, self.x_center + self.x_extent],
            'y': [self.y_lo, self.y_hi],
            'nx': self.nx,
            'ny': self.ny,
        }


def region_domain(params, n, index, x_extent, y_pad, nx, ny):
    """DomainSpec for region `index` (1-based, counted upward) of the n-region decomposition"""
    decomposition = decompose_domains(n, params)
    if not 1 <= index <= n:
        raise ValueError(f"Region index must lie in 1..{n}, got {index}")
    lo, hi = decomposition.regions[index - 1]
    bounded = math.isfinite(lo) and math.isfinite(hi)
    if not math.isfinite(lo) and not math.isfinite(hi):
        lo, hi = -y_pad, y_pad
    elif not math.isfinite(lo):
        lo = hi - y_pad
    elif not math.isfinite(hi):
        hi = lo + y_pad
    return DomainSpec(n=n, index=index, y_lo=lo, y_hi=hi, x_extent=x_extent, y_pad=y_pad,
                      nx=nx, ny=ny, bounded=bounded)


def gauss_legendre(lo, hi, order):
    """Gauss-Legendre nodes and weights mapped to [lo, hi]"""
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


@lru_cache(maxsize=16)
def measure(dom, spec):
    """
    Quadrature points z and weights w * S(conj z, z) / pi on the rectangle.
    Phi(conj z - z) = Phi(-2iy) depends on y alone.
    """
    xs, wx = gauss_legendre(dom.x_center - dom.x_extent, dom.x_center + dom.x_extent, dom.nx)
    ys, wy = gauss_legendre(dom.y_lo, dom.y_hi, dom.ny)
    phi = np.array([complex(spec.phi(-2j * y)) for y in ys])

    z = xs[None, :] + 1j * ys[:, None]
    prefactor = np.exp(1j * math.pi * (z * z - np.conj(z) ** 2))
    weights = (wy[:, None] * wx[None, :]) * prefactor * phi[:, None] / math.pi
    return z.ravel(), weights.ravel()


def _check_finite(values, z, label):
    bad = ~np.isfinite(values)
    if bad.any():
        k = int(np.argmax(bad))
        raise QuadratureError(f"Non-finite {label} at z = {z[k]}")


def inner_product(f, g, dom, spec):
    """(1/pi) int conj(f(z)) S(conj z, z) g(z) dx dy over the truncated rectangle"""
    z, weights = measure(dom, spec)
    integrand = np.conj(f(z)) * weights * g(z)
    _check_finite(integrand, z, 'integrand')
    return complex(np.sum(integrand))


def _paired_residual(lhs, rhs):
    scale = abs(lhs) + abs(rhs)
    if scale == 0:
        return 0.0
    return abs(lhs - rhs) / scale


def hermiticity_residual(pair, f, g, dom, spec):
    """|<A f, g> - <f, B g>| / (|<A f, g>| + |<f, B g>|) for pair = (A, B), B the adjoint of A"""
    if tuple(pair) not in HERMITICITY_PAIRS:
        raise ValueError(f"Unsupported pair {pair}; choose from {HERMITICITY_PAIRS}")
    left, right = (operator(name, spec.params, spec.spin) for name in pair)
    lhs = inner_product(apply(left, f), g, dom, spec)
    rhs = inner_product(f, apply(right, g), dom, spec)
    residual = _paired_residual(lhs, rhs)
    logger.info(f"Hermiticity {pair[0]}* = {pair[1]} on region {dom.index}/{dom.n}, X={dom.x_extent}: {residual:.2e}")
    return residual


@dataclass(frozen=True)
class GramReport:
    matrix: np.ndarray
    eigenvalues: np.ndarray
    hermitian_defect: float

    @property
    def min_eigenvalue(self):
        return float(self.eigenvalues[0])

    @property
    def max_eigenvalue(self):
        return float(self.eigenvalues[-1])

    def positive(self, rel_tol=1e-6):
        return self.min_eigenvalue >= -rel_tol * abs(self.max_eigenvalue)


def gram_matrix(basis, dom, spec):
    """G[i][j] = <b_i, b_j> with its Hermitian eigenvalues"""
    if not 1 <= len(basis) <= MAX_GRAM_SIZE:
        raise ValueError(f"Basis size must lie in 1..{MAX_GRAM_SIZE}, got {len(basis)}")
    z, weights = measure(dom, spec)
    values = np.array([b(z) for b in basis]).T
    _check_finite(values, np.repeat(z, len(basis)), 'basis value')
    gram = (values.conj().T * weights) @ values
    _check_finite(gram.ravel(), np.zeros(gram.size), 'Gram entry')
    defect = float(np.max(np.abs(gram - gram.conj().T)) / max(np.max(np.abs(gram)), 1e-300))
    eigenvalues = np.linalg.eigvalsh(0.5 * (gram + gram.conj().T))
    logger.info(
        f"Gram matrix {len(basis)}x{len(basis)}: eigenvalues in [{eigenvalues[0]:.3e}, {eigenvalues[-1]:.3e}], "
        f"Hermitian defect {defect:.1e}"
    )
    return GramReport(matrix=gram, eigenvalues=eigenvalues, hermitian_defect=defect)


@dataclass(frozen=True)
class ContinuousReport:
    residuals: dict
    u_expectation: complex

    @property
    def u_positive(self):
        value = self.u_expectation
        return value.real > 0 and abs(value.imag) <= 1e-10 * abs(value)


def continuous_series_check(params, f, g, extent=12.0, nodes=400):
    """
    Adjoint relations of the L2(R) product for u, v and their tilde
    partners: in Regime I every one of them is self-adjoint.
    """
    if params.regime != Regime.I:
        raise RegimeError("Continuous-series check runs in Regime I")
    xs, wx = gauss_legendre(-extent, extent, nodes)

    def flat(a, b):
        values = np.conj(a(xs)) * b(xs) * wx
        _check_finite(values, xs, 'integrand')
        return complex(np.sum(values))

    residuals = {}
    for name in ('u', 'v', '~u', '~v'):
        op = operator(name, params)
        residuals[name] = _paired_residual(flat(f, apply(op, g)), flat(apply(op, f), g))
    expectation = flat(f, apply(operator('u', params), f))
    report = ContinuousReport(residuals=residuals, u_expectation=expectation)
    logger.info(f"Continuous series ({params}): residuals {residuals}, <f, uf> = {expectation:.6g}")
    return report

# kernel/weights.py

import cmath
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from enum import Enum
from typing import Optional

import numpy as np

from params.models import (
    RegimeParams,
    Spin,
    SpinConvention,
    discrete_spin,
    dual,
    spin_from_a,
)
from qdilog.dilog import QDilog

logger = logging.getLogger(__name__)


class WeightVariant(str, Enum):
    # product of sines, discrete spin a = n*omega_pp
    PRODUCT = 'product'
    # gamma ratio with the exponential correction, any spin
    GAMMA = 'gamma'
    # gamma ratio with the constant prefactor alone
    GAMMA_PRINTED = 'printed'


def phi_product(t, n, params):
    """
    prod_{m=1}^{n-1} sin(pi(t + 2m omega_pp)/(2 omega_p)) sin(pi(t + 2m omega_pp)/(2 omega))

    Accepts scalars or numpy arrays; the empty product is 1.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"Product weight needs a positive integer n, got {n}")
    t = np.asarray(t, dtype=complex)
    value = np.ones_like(t)
    for m in range(1, int(n)):
        shifted = math.pi * (t + 2 * m * params.omega_pp)
        value = value * np.sin(shifted / (2 * params.omega_p)) * np.sin(shifted / (2 * params.omega))
    return value if value.ndim else complex(value)


def sine_square_form(t, n, params):
    """prod |sin(pi(t + 2m omega_pp)/(2 omega_p))|^2, equal to phi_product on imaginary t in Regime II"""
    t = np.asarray(t, dtype=complex)
    value = np.ones(t.shape)
    for m in range(1, int(n)):
        value = value * np.abs(np.sin(math.pi * (t + 2 * m * params.omega_pp) / (2 * params.omega_p))) ** 2
    return value if value.ndim else float(value)


def phi_gamma(t, a, qdilog, corrected=True):
    """
    exp(2 pi i (a + omega_pp)) exp(-2 pi i (a - omega_pp) t) gamma(t - omega_pp + 2a) / gamma(t + omega_pp)

    With corrected=False the t-linear exponential is dropped, which
    leaves t-independent factors in both shift equations.
    """
    p = qdilog.params
    t = complex(t)
    a = complex(a)
    numerator = qdilog.log_gamma(t - p.omega_pp + 2 * a)
    if numerator is None:
        return 0j
    denominator = qdilog.log_gamma(t + p.omega_pp)
    if denominator is None:
        raise ZeroDivisionError(f"gamma(t + omega_pp) vanishes at t = {t}")
    exponent = 2j * math.pi * (a + p.omega_pp) + numerator - denominator
    if corrected:
        exponent -= 2j * math.pi * (a - p.omega_pp) * t
    return cmath.exp(exponent)


def reduction_constant(n, params):
    """
    Closed-form phi_gamma / phi_product at a = n*omega_pp:
    exp(2 pi i (n+1) omega_pp) (-4)^(n-1) exp(2 pi i n(n-1) omega_pp^2)
    """
    w = params.omega_pp
    return (
        cmath.exp(2j * math.pi * (n + 1) * w)
        * (-4) ** (n - 1)
        * cmath.exp(2j * math.pi * n * (n - 1) * w * w)
    )


@dataclass(frozen=True)
class WeightSpec:
    """A weight Phi together with the spin entering the E-condition"""

    variant: WeightVariant
    params: RegimeParams
    spin: Spin
    n: Optional[int] = None
    qdilog: Optional[QDilog] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.variant == WeightVariant.PRODUCT and self.n is None:
            raise ValueError("Product weight needs n")
        if self.variant != WeightVariant.PRODUCT and self.qdilog is None:
            object.__setattr__(self, 'qdilog', QDilog(self.params))

    @classmethod
    def discrete(cls, params, n, convention=SpinConvention.SEC3):
        return cls(WeightVariant.PRODUCT, params, discrete_spin(params, n, convention), n=int(n))

    @classmethod
    def generic(cls, params, a, convention=SpinConvention.SEC3, variant=WeightVariant.GAMMA, qdilog=None):
        return cls(WeightVariant(variant), params, spin_from_a(params, a, convention), qdilog=qdilog)

    @property
    def a(self):
        return self.spin.a

    @property
    def Z(self):
        return self.spin.Z

    def __str__(self):
        if self.variant == WeightVariant.PRODUCT:
            return f"product weight n={self.n} ({self.params})"
        return f"{self.variant.value} weight a={self.a:.6g} ({self.params})"

    def phi(self, t):
        if self.variant == WeightVariant.PRODUCT:
            return phi_product(complex(t), self.n, self.params)
        return phi_gamma(t, self.a, self.qdilog, corrected=self.variant == WeightVariant.GAMMA)

    __call__ = phi

    def dual(self):
        """Weight seen from the dual side: omega <-> omega_p, Z <-> Z_tilde"""
        return self._dual

    @cached_property
    def _dual(self):
        spin = Spin(
            convention=self.spin.convention,
            a=self.spin.a,
            Z=self.spin.Z_tilde,
            Z_tilde=self.spin.Z,
            n=self.spin.n,
        )
        qdilog = None
        if self.qdilog is not None:
            qdilog = QDilog(dual(self.params), nodes=self.qdilog.nodes)
        return WeightSpec(self.variant, dual(self.params), spin, n=self.n, qdilog=qdilog)


def kernel_S(w, z, spec):
    """exp(i pi (z^2 - w^2)) Phi(w - z), w standing in for conj(z)"""
    w = complex(w)
    z = complex(z)
    phi = spec.phi(w - z)
    if phi == 0:
        return 0j
    return cmath.exp(1j * math.pi * (z * z - w * w)) * phi


def measured_reduction_constant(params, n, samples=20):
    """
    Ratio phi_gamma / phi_product at a = n*omega_pp over imaginary t
    below the origin. Returns (mean ratio, relative spread).
    """
    spec = WeightSpec.generic(params, n * params.omega_pp)
    ys = np.linspace(-1.9, -0.1, samples) * params.mu
    ratios = np.array([spec.phi(1j * y) / phi_product(1j * y, n, params) for y in ys])
    mean = ratios.mean()
    spread = float(ratios.std() / abs(mean))
    logger.info(f"Reduction constant n={n}: measured {mean:.10g}, relative spread {spread:.2e}")
    return complex(mean), spread


def phi_profile(spec, ys):
    """CSV rows (y, re Phi, im Phi) along t = -2iy"""
    rows = []
    for y in ys:
        value = complex(spec.phi(-2j * y))
        rows.append((float(y), value.real, value.imag))
    return rows

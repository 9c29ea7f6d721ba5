# params/models.py

import cmath
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

logger = logging.getLogger(__name__)

# Tolerance used when deciding whether tau sits on a regime locus
LOCUS_TOL = 1e-12


class RegimeError(ValueError):
    """Raised when tau does not lie on the locus of the requested regime"""


class Regime(str, Enum):
    I = 'I'
    II = 'II'


class SpinConvention(str, Enum):
    # Z = exp(i*pi*a/omega), the continuous-series parametrization
    SEC2 = 'Sec2'
    # Z = exp(-i*pi*a/omega), the sign used for the discrete series
    SEC3 = 'Sec3'


@dataclass(frozen=True)
class RegimeParams:
    """Weierstrass-like half-periods with omega*omega_p = -1/4"""

    regime: Regime
    tau: complex
    omega: complex
    omega_p: complex
    omega_pp: complex
    q: complex
    q_tilde: complex
    mu: float

    def __str__(self):
        return f"Regime {self.regime.value} tau={self.tau:.6g}"

    @property
    def b(self):
        """Scale of the dilogarithm integral, b = -2i*omega_p"""
        return -2j * self.omega_p

    def invariant_defects(self):
        """Absolute defects of every structural invariant, keyed by name"""
        defects = {
            'omega_product': abs(self.omega * self.omega_p + 0.25),
            'tau_ratio': abs(self.tau - self.omega_p / self.omega),
            'omega_pp_sum': abs(self.omega_pp - (self.omega + self.omega_p)),
            'omega_pp_real': abs(self.omega_pp.real),
            'q_formula': abs(self.q + cmath.exp(1j * math.pi * self.omega_pp / self.omega)),
        }
        if self.regime == Regime.I:
            defects['conj_omega'] = abs(self.omega.conjugate() + self.omega)
            defects['conj_omega_p'] = abs(self.omega_p.conjugate() + self.omega_p)
        else:
            defects['conj_omega'] = abs(self.omega.conjugate() + self.omega_p)
        return defects

    def satisfies_invariants(self, tol=1e-12):
        return max(self.invariant_defects().values()) <= tol


@dataclass(frozen=True)
class Spin:
    """Spin a together with the central values Z and Z_tilde"""

    convention: SpinConvention
    a: complex
    Z: complex
    Z_tilde: complex
    n: Optional[int] = None

    @property
    def is_discrete(self):
        return self.n is not None


def _build(regime, omega, omega_p):
    tau = omega_p / omega
    omega_pp = omega + omega_p
    return RegimeParams(
        regime=regime,
        tau=tau,
        omega=omega,
        omega_p=omega_p,
        omega_pp=omega_pp,
        q=cmath.exp(1j * math.pi * tau),
        q_tilde=cmath.exp(1j * math.pi / tau),
        mu=omega_pp.imag,
    )


def params_from_tau(tau, regime):
    """Construct the half-periods for tau on the locus of the given regime"""

    regime = Regime(regime)
    tau = complex(tau)

    if regime == Regime.I:
        if abs(tau.imag) > LOCUS_TOL or tau.real <= 0:
            raise RegimeError(f"Regime I requires real positive tau, got {tau}")
        root = math.sqrt(tau.real)
        params = _build(regime, complex(0.0, 0.5 / root), complex(0.0, 0.5 * root))
    else:
        if abs(abs(tau) - 1.0) > LOCUS_TOL:
            raise RegimeError(f"Regime II requires |tau| = 1, got |tau| = {abs(tau)}")
        if tau.imag <= LOCUS_TOL:
            raise RegimeError(f"Regime II requires Im tau > 0 (tau = +-1 excluded), got {tau}")
        theta = cmath.phase(tau)
        alpha = 0.5 * (math.pi - theta)
        omega = complex(0.5 * math.cos(alpha), 0.5 * math.sin(alpha))
        # conj(omega) = -omega_p holds bit for bit
        params = _build(regime, omega, complex(-omega.real, omega.imag))

    logger.debug(f"Built {params}: omega={params.omega}, omega_p={params.omega_p}, mu={params.mu}")
    return params


def regime_ii_from_angle(degrees):
    """Regime II parameters for tau = exp(i*theta), theta given in degrees"""
    theta = math.radians(degrees)
    return params_from_tau(complex(math.cos(theta), math.sin(theta)), Regime.II)


def dual(params):
    """Interchange omega and omega_p (tau -> 1/tau, q <-> q_tilde)"""
    return replace(
        params,
        tau=params.omega / params.omega_p,
        omega=params.omega_p,
        omega_p=params.omega,
        omega_pp=params.omega_p + params.omega,
        q=params.q_tilde,
        q_tilde=params.q,
    )


def spin_from_a(params, a, convention=SpinConvention.SEC3, n=None):
    """Spin for an arbitrary complex a under the chosen sign convention"""

    convention = SpinConvention(convention)
    a = complex(a)
    sign = 1.0 if convention == SpinConvention.SEC2 else -1.0
    return Spin(
        convention=convention,
        a=a,
        Z=cmath.exp(sign * 1j * math.pi * a / params.omega),
        Z_tilde=cmath.exp(sign * 1j * math.pi * a / params.omega_p),
        n=n,
    )


def discrete_spin(params, n, convention=SpinConvention.SEC3):
    """Discrete-series spin a = n*omega_pp"""
    if int(n) != n or n <= 0:
        raise ValueError(f"Discrete spin needs a positive integer n, got {n}")
    n = int(n)
    return spin_from_a(params, n * params.omega_pp, convention, n=n)


def central_charge(tau):
    """Virasoro central charge c = 1 + 6(tau + 1/tau + 2)"""
    tau = complex(tau)
    if tau == 0:
        raise ValueError("Central charge is undefined at tau = 0")
    return 1 + 6 * (tau + 1 / tau + 2)


def central_charge_window(regime):
    """Open interval of real central charges reachable in a regime"""
    if Regime(regime) == Regime.I:
        return (25.0, math.inf)
    return (1.0, 25.0)

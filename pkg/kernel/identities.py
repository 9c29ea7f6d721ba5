# kernel/identities.py

import cmath
import logging
import math

from .weights import kernel_S

logger = logging.getLogger(__name__)

# Sine denominators smaller than this refuse the shift-equation check
DENOMINATOR_GUARD = 1e-10
# Both sides below this are treated as underflow
UNDERFLOW = 1e-300


class DenominatorGuardError(ArithmeticError):
    """A sine denominator of a shift equation is too close to zero"""


def _residual(lhs_terms, rhs_terms):
    """
    |sum(lhs) - sum(rhs)| over the summed magnitudes of every term;
    nan when everything underflows
    """
    scale = sum(abs(x) for x in lhs_terms) + sum(abs(x) for x in rhs_terms)
    if scale < UNDERFLOW:
        return math.nan
    return abs(sum(lhs_terms) - sum(rhs_terms)) / scale


def k_identity_residual(w, z, spec):
    """q S(w, z - 2 omega_p) e^{-i pi z/omega} = q^-1 S(w + 2 omega_p, z) e^{-i pi w/omega}"""
    p = spec.params
    w = complex(w)
    z = complex(z)
    lhs = p.q * kernel_S(w, z - 2 * p.omega_p, spec) * cmath.exp(-1j * math.pi * z / p.omega)
    rhs = kernel_S(w + 2 * p.omega_p, z, spec) * cmath.exp(-1j * math.pi * w / p.omega) / p.q
    residual = _residual([lhs], [rhs])
    if math.isnan(residual):
        logger.warning(f"K-identity inconclusive at w={w}, z={z}: both sides underflow")
    return residual


def e_identity_residual(w, z, spec):
    """S(w, z - 2 omega_p) + Z e^{i pi z/omega} S(w, z) = S(w + 2 omega_p, z) + Z^-1 e^{i pi w/omega} S(w, z)"""
    p = spec.params
    w = complex(w)
    z = complex(z)
    centre = kernel_S(w, z, spec)
    lhs = [
        kernel_S(w, z - 2 * p.omega_p, spec),
        spec.Z * cmath.exp(1j * math.pi * z / p.omega) * centre,
    ]
    rhs = [
        kernel_S(w + 2 * p.omega_p, z, spec),
        cmath.exp(1j * math.pi * w / p.omega) * centre / spec.Z,
    ]
    residual = _residual(lhs, rhs)
    if math.isnan(residual):
        logger.warning(f"E-identity inconclusive at w={w}, z={z}: both sides underflow")
    return residual


def dual_k_identity_residual(w, z, spec):
    return k_identity_residual(w, z, spec.dual())


def dual_e_identity_residual(w, z, spec):
    return e_identity_residual(w, z, spec.dual())


def _shift_residual(t, spec, shift, period):
    """Phi(t + 2 shift) sin(pi(t + 2 omega_pp)/2 period) = Phi(t) sin(pi(t + 2a)/2 period)"""
    p = spec.params
    denominator = cmath.sin(math.pi * (t + 2 * p.omega_pp) / (2 * period))
    if abs(denominator) < DENOMINATOR_GUARD:
        raise DenominatorGuardError(f"sin(pi(t + 2 omega_pp)/2 period) = {denominator:.3g} at t = {t}")
    numerator = cmath.sin(math.pi * (t + 2 * spec.a) / (2 * period))
    return _residual([spec.phi(t + 2 * shift) * denominator], [spec.phi(t) * numerator])


def peq_residuals(t, spec):
    """
    Residuals of
        Phi(t + 2 omega_p) / Phi(t) = sin(pi(t + 2a)/2 omega) / sin(pi(t + 2 omega_pp)/2 omega)
    and of its omega <-> omega_p partner, both cross-multiplied.
    """
    p = spec.params
    t = complex(t)
    return (
        _shift_residual(t, spec, p.omega_p, p.omega),
        _shift_residual(t, spec, p.omega, p.omega_p),
    )


def identity_grid(spec, kind, points):
    """CSV rows (re w, im w, re z, im z, residual) for kind in {'k', 'e', 'k_dual', 'e_dual'}"""
    check = {
        'k': k_identity_residual,
        'e': e_identity_residual,
        'k_dual': k_identity_residual,
        'e_dual': e_identity_residual,
    }[kind]
    target = spec.dual() if kind.endswith('_dual') else spec
    rows = []
    for w, z in points:
        w = complex(w)
        z = complex(z)
        rows.append((w.real, w.imag, z.real, z.imag, check(w, z, target)))
    return rows

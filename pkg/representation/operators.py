# representation/operators.py

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from params.models import RegimeParams, Spin, dual

logger = logging.getLogger(__name__)


class OperatorName(str, Enum):
    U = 'u'
    U_INV = 'u^-1'
    V = 'v'
    V_INV = 'v^-1'
    K = 'K'
    K_INV = 'K^-1'
    E = 'E'
    F = 'F'
    C = 'C'
    U_T = '~u'
    U_T_INV = '~u^-1'
    V_T = '~v'
    V_T_INV = '~v^-1'
    K_T = '~K'
    K_T_INV = '~K^-1'
    E_T = '~E'
    F_T = '~F'

    @property
    def is_tilde(self):
        return self.value.startswith('~')

    @property
    def base(self):
        return OperatorName(self.value.lstrip('~'))


@dataclass(frozen=True)
class OperatorSymbol:
    """
    A generator of the modular double acting on GEP functions.
    Tilde operators use omega <-> omega_p, q_tilde and Z_tilde.
    """

    name: OperatorName
    params: RegimeParams
    spin: Optional[Spin] = None

    def __str__(self):
        return self.name.value

    def side(self):
        """(params, Z) of the copy this operator belongs to"""
        if self.name.is_tilde:
            return dual(self.params), (self.spin.Z_tilde if self.spin else None)
        return self.params, (self.spin.Z if self.spin else None)


# Regime II conjugation: each generator is adjoint to its tilde partner
CONJUGATES = {
    OperatorName.U: OperatorName.U_T,
    OperatorName.V: OperatorName.V_T,
    OperatorName.K: OperatorName.K_T,
    OperatorName.E: OperatorName.E_T,
    OperatorName.F: OperatorName.F_T,
}
CONJUGATES.update({v: k for k, v in list(CONJUGATES.items())})


def adjoint_name(name):
    return CONJUGATES[OperatorName(name)].value


def operator(name, params, spin=None):
    return OperatorSymbol(OperatorName(name), params, spin)


def _act(name, p, Z, f):
    """Action of an untilded generator for half-periods p and central value Z"""
    q = p.q
    if name == OperatorName.U:
        return f.multiply_exp(-1j * math.pi / p.omega)
    if name == OperatorName.U_INV:
        return f.multiply_exp(1j * math.pi / p.omega)
    if name == OperatorName.V:
        return f.shift(2 * p.omega_p)
    if name == OperatorName.V_INV:
        return f.shift(-2 * p.omega_p)
    if name == OperatorName.K:
        return _act(OperatorName.U, p, Z, _act(OperatorName.V, p, Z, f)) * (1 / q)
    if name == OperatorName.K_INV:
        return _act(OperatorName.U_INV, p, Z, _act(OperatorName.V_INV, p, Z, f)) * (1 / q)

    if Z is None:
        raise ValueError(f"{name.value} needs a spin")
    scalar = 1j / (q - 1 / q)
    if name == OperatorName.E:
        return (_act(OperatorName.V, p, Z, f) + _act(OperatorName.U_INV, p, Z, f) * Z) * scalar
    if name == OperatorName.F:
        return (_act(OperatorName.U, p, Z, f) + _act(OperatorName.V_INV, p, Z, f) * (1 / Z)) * scalar
    if name == OperatorName.C:
        fe = _act(OperatorName.F, p, Z, _act(OperatorName.E, p, Z, f))
        return (
            _act(OperatorName.K, p, Z, f) * q
            + _act(OperatorName.K_INV, p, Z, f) * (1 / q)
            + fe * ((q - 1 / q) ** 2)
        )
    raise ValueError(f"Unknown operator {name}")


def apply(op, f):
    """Exact action of op on a GEP function"""
    p, Z = op.side()
    return _act(op.name.base, p, Z, f)


def compose(f, *ops):
    """Apply ops right to left: compose(f, A, B) = A(B(f))"""
    for op in reversed(ops):
        f = apply(op, f)
    return f


def relative_defect(lhs, rhs, points, constituents=None):
    """
    max over points of |lhs(z) - rhs(z)| over the summed term magnitudes.
    When lhs is a merged sum whose terms may cancel, pass the unmerged
    summands as constituents; they set the scale instead of lhs and rhs.
    """
    points = np.asarray(points, dtype=complex)
    parts = constituents if constituents is not None else (lhs, rhs)
    scale = sum(part.magnitude(points) for part in parts)
    scale = np.maximum(scale, 1e-300)
    return float(np.max(np.abs(lhs(points) - rhs(points)) / scale))


def operator_residuals(f, params, spin, points):
    """Pointwise residuals of the Weyl, quantum-group and Casimir relations on f"""
    op = {name: operator(name, params, spin) for name in OperatorName}
    q = params.q
    q_t = params.q_tilde

    def ab(a, b):
        return compose(f, op[a], op[b])

    residuals = {
        'uv': relative_defect(ab('u', 'v'), ab('v', 'u') * q ** 2, points),
        '~u~v': relative_defect(ab('~u', '~v'), ab('~v', '~u') * q_t ** 2, points),
        'KE': relative_defect(ab('K', 'E'), ab('E', 'K') * q ** 2, points),
        'KF': relative_defect(ab('K', 'F'), ab('F', 'K') * q ** -2, points),
        'EF': relative_defect(
            ab('E', 'F'),
            ab('F', 'E') + (apply(op['K'], f) - apply(op['K^-1'], f)) * (1 / (q - 1 / q)),
            points,
        ),
        'KK^-1': relative_defect(ab('K', 'K^-1'), f, points),
        'C': casimir_residual(f, params, spin, points),
    }
    for plain in ('u', 'v', 'u^-1', 'v^-1'):
        for tilde in ('~u', '~v', '~u^-1', '~v^-1'):
            residuals[f"[{plain},{tilde}]"] = relative_defect(ab(plain, tilde), ab(tilde, plain), points)
    for plain in ('K', 'E', 'F'):
        for tilde in ('~K', '~E', '~F'):
            residuals[f"[{plain},{tilde}]"] = relative_defect(ab(plain, tilde), ab(tilde, plain), points)
    logger.debug(f"Operator residuals: max {max(residuals.values()):.2e}")
    return residuals


def casimir_residual(f, params, spin, points):
    """
    (Cf)(z) + (Z + Z^-1) f(z) over the magnitudes of q Kf, q^-1 K^-1 f,
    (q - q^-1)^2 FEf and (Z + Z^-1) f taken before they are summed
    """
    q = params.q
    parts = (
        apply(operator('K', params, spin), f) * q,
        apply(operator('K^-1', params, spin), f) * (1 / q),
        compose(f, operator('F', params, spin), operator('E', params, spin)) * ((q - 1 / q) ** 2),
    )
    c = parts[0] + parts[1] + parts[2]
    central = f * -(spin.Z + 1 / spin.Z)
    return relative_defect(c, central, points, constituents=parts + (central,))

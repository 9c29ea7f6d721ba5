# qdilog/dilog.py

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np

from verification.utils import (
    get_contour_nodes,
    get_ladder_max_steps,
    get_pole_proximity,
    get_strip_fraction,
)

logger = logging.getLogger(__name__)

# Integrand magnitude at the truncation point, before the safety margin
TRUNCATION_LOG = math.log(1e18) + 5.0
# Largest (d1) residual accepted when fixing the sign/reflection convention
CALIBRATION_TOL = 1e-6
PROBE_POINTS = (-0.7, -0.31, 0.0, 0.23, 0.55)
# |Re zeta| resolved by the base node count; beyond it the nodes double per octave
RESOLVED_REAL_PART = 1.5


class PoleProximityError(ArithmeticError):
    """The requested point lies too close to a pole of gamma"""

    def __init__(self, zeta, pole, distance):
        self.zeta = zeta
        self.pole = pole
        self.distance = distance
        super().__init__(f"gamma({zeta}) requested {distance:.3g} away from the pole at {pole}")


class LadderExhaustedError(ArithmeticError):
    """Continuation into the base strip needed more steps than allowed"""


class CalibrationError(ArithmeticError):
    """No candidate convention satisfies the functional equations"""


@dataclass(frozen=True)
class Calibration:
    negate: bool
    invert: bool
    d1_residual: float
    d2_residual: float

    def __str__(self):
        argument = '-zeta' if self.negate else 'zeta'
        power = '-1' if self.invert else '1'
        return f"Phi_b({argument})^{power}"


def relative_residual(lhs, rhs, scale):
    """|lhs - rhs| over the largest constituent magnitude"""
    norm = max(abs(lhs), abs(rhs), scale)
    if norm == 0:
        return 0.0
    return abs(lhs - rhs) / norm


class QDilog:
    """
    Noncompact quantum dilogarithm gamma with

        gamma(z + omega_p) / gamma(z - omega_p) = 1 + exp(-i pi z / omega)
        gamma(z + omega) / gamma(z - omega)     = 1 + exp(-i pi z / omega_p)

    Inside the base strip |Im z| <= strip_fraction * mu it is the contour
    integral exp(int e^{2izw} / (4 sinh(bw) sinh(w/b) w) dw) over the real
    line lifted above the origin, b = -2i*omega_p. Outside the strip it is
    continued by the functional equations (the ladder).
    """

    def __init__(self, params, nodes=None, strip_fraction=None, max_steps=None, pole_proximity=None):
        self.params = params
        self.nodes = int(nodes or get_contour_nodes())
        self.half_width = (strip_fraction or get_strip_fraction()) * params.mu
        self.max_steps = int(max_steps or get_ladder_max_steps())
        self.pole_proximity = pole_proximity if pole_proximity is not None else get_pole_proximity()
        if self.nodes <= 0 or self.max_steps <= 0:
            raise ValueError("Contour nodes and ladder steps must be positive")

        b = params.b
        # the nearest sinh zeros sit at 2*pi*omega and 2*pi*omega_p
        self.lift = math.pi * min(params.omega.imag, params.omega_p.imag)
        self._b = b
        self._node_sets = {}
        self.calibration = self._calibrate()
        logger.info(
            f"QDilog for {params}: {self.nodes} nodes, strip half-width {self.half_width:.4g}, "
            f"calibrated to {self.calibration} (d1 {self.calibration.d1_residual:.2e}, "
            f"d2 {self.calibration.d2_residual:.2e})"
        )

    # Contour integral

    def _density(self, zeta):
        """
        Node multiplier for the oscillation exp(2i zeta w): a power of two
        keeping the spacing fine enough for the largest |Re zeta| in the batch
        """
        real = float(np.max(np.abs(np.real(zeta)))) if np.size(zeta) else 0.0
        ratio = (real + RESOLVED_REAL_PART) / (2 * RESOLVED_REAL_PART)
        return 1 if ratio <= 1 else 2 ** math.ceil(math.log2(ratio))

    def _node_set(self, reach, density=1):
        """Trapezoid nodes and weights covering |Im zeta| <= reach"""
        key = (round(reach, 12), density)
        if key not in self._node_sets:
            decay = 2.0 * (self.params.mu - reach)
            if decay <= 0:
                raise ValueError(f"Integral representation needs |Im zeta| < mu, got reach {reach}")
            extent = TRUNCATION_LOG / decay
            x = np.linspace(-extent, extent, self.nodes * density + 1)
            w = x + 1j * self.lift
            weights = np.full(x.shape, x[1] - x[0])
            weights[[0, -1]] *= 0.5
            denominator = 4.0 * np.sinh(self._b * w) * np.sinh(w / self._b) * w
            self._node_sets[key] = (w, weights / denominator)
            if density > 1:
                logger.debug(f"Node set for reach {reach:.4g} refined {density}x to {x.size} nodes")
        return self._node_sets[key]

    def _integral(self, zeta, reach):
        """log Phi_b(-zeta) for an array of points"""
        zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
        w, weights = self._node_set(reach, self._density(zeta))
        return np.exp(2j * np.outer(zeta, w)) @ weights

    def _candidate_log(self, zeta, negate, invert, reach):
        value = self._integral(zeta if negate else -np.asarray(zeta), reach)
        return -value if invert else value

    def _calibrate(self):
        p = self.params
        reach = max(p.omega.imag, p.omega_p.imag)
        probes = np.array(PROBE_POINTS, dtype=complex)
        best = None
        for negate in (True, False):
            for invert in (False, True):
                residuals = []
                for shift, other in ((p.omega_p, p.omega), (p.omega, p.omega_p)):
                    up = np.exp(self._candidate_log(probes + shift, negate, invert, reach))
                    down = np.exp(self._candidate_log(probes - shift, negate, invert, reach))
                    factor = 1.0 + np.exp(-1j * math.pi * probes / other)
                    residuals.append(max(
                        relative_residual(u, d * f, abs(d) * (1 + abs(f - 1)))
                        for u, d, f in zip(up, down, factor)
                    ))
                candidate = Calibration(negate, invert, residuals[0], residuals[1])
                logger.debug(f"Calibration candidate {candidate}: d1 {residuals[0]:.2e}, d2 {residuals[1]:.2e}")
                if best is None or candidate.d1_residual < best.d1_residual:
                    best = candidate
        if max(best.d1_residual, best.d2_residual) > CALIBRATION_TOL:
            raise CalibrationError(
                f"Best convention {best} leaves residuals d1={best.d1_residual:.2e}, d2={best.d2_residual:.2e}"
            )
        return best

    def _base_log(self, zeta):
        c = self.calibration
        return complex(self._candidate_log([zeta], c.negate, c.invert, self.half_width)[0])

    # Lattices

    def zero_lattice(self, p, q):
        """omega_pp + 2p*omega + 2q*omega_p"""
        return self.params.omega_pp + 2 * p * self.params.omega + 2 * q * self.params.omega_p

    def pole_lattice(self, p, q):
        """-omega_pp - 2p*omega - 2q*omega_p"""
        return -self.zero_lattice(p, q)

    def nearest_pole(self, zeta):
        """(pole, distance) for the closest pole, or (None, inf) when none is in reach"""
        p = self.params
        # every pole sits at or below Im = -mu
        if zeta.imag > -p.mu + self.pole_proximity:
            return None, math.inf
        depth = max(0.0, -zeta.imag - p.mu) + 1.0
        pmax = int(depth / (2 * p.omega.imag)) + 1
        qmax = int(depth / (2 * p.omega_p.imag)) + 1
        pp, qq = np.meshgrid(np.arange(pmax + 1), np.arange(qmax + 1))
        poles = -(p.omega_pp + 2 * pp * p.omega + 2 * qq * p.omega_p).ravel()
        distances = np.abs(poles - zeta)
        k = int(np.argmin(distances))
        return complex(poles[k]), float(distances[k])

    # Evaluation

    def _step(self, z, upward):
        """Pick the shift s of the next ladder step together with its partner period"""
        p = self.params
        pairs = ((p.omega_p, p.omega), (p.omega, p.omega_p))
        if abs(p.omega.imag - p.omega_p.imag) > 1e-12:
            return min(pairs, key=lambda pair: pair[0].imag)
        # equal heights: keep the real part from drifting
        sign = -1 if upward else 1
        return min(pairs, key=lambda pair: abs((z + 2 * sign * pair[0]).real))

    def log_gamma(self, zeta):
        """
        log gamma(zeta) on the branch fixed by the ladder, or None when
        gamma(zeta) vanishes exactly at a lattice zero reached by a step.
        """
        zeta = complex(zeta)
        pole, distance = self.nearest_pole(zeta)
        if distance < self.pole_proximity:
            raise PoleProximityError(zeta, pole, distance)

        z = zeta
        log_scale = 0j
        steps = 0
        while abs(z.imag) > self.half_width:
            if steps >= self.max_steps:
                logger.warning(f"Ladder exhausted after {steps} steps at gamma({zeta})")
                raise LadderExhaustedError(
                    f"gamma({zeta}) needs more than {self.max_steps} ladder steps"
                )
            upward = z.imag > 0
            s, other = self._step(z, upward)
            if upward:
                factor = 1 + cmath.exp(-1j * math.pi * (z - s) / other)
                if factor == 0:
                    return None
                log_scale += cmath.log(factor)
                z -= 2 * s
            else:
                factor = 1 + cmath.exp(-1j * math.pi * (z + s) / other)
                if abs(factor) < self.pole_proximity * 1e-6:
                    raise PoleProximityError(zeta, z, abs(factor))
                log_scale -= cmath.log(factor)
                z += 2 * s
            steps += 1
        return self._base_log(z) + log_scale

    def gamma(self, zeta):
        value = self.log_gamma(zeta)
        if value is None:
            return 0j
        return cmath.exp(value)

    __call__ = gamma

    def gamma_at_origin(self):
        """Closed form gamma(0) = exp(i pi (b^2 + b^-2) / 24)"""
        b = self._b
        return cmath.exp(1j * math.pi * (b * b + 1 / (b * b)) / 24)

    # Residuals

    def d1_residual(self, zeta):
        """gamma(z + omega_p) = gamma(z - omega_p) (1 + exp(-i pi z / omega))"""
        return self._functional_residual(complex(zeta), self.params.omega_p, self.params.omega)

    def d2_residual(self, zeta):
        """gamma(z + omega) = gamma(z - omega) (1 + exp(-i pi z / omega_p))"""
        return self._functional_residual(complex(zeta), self.params.omega, self.params.omega_p)

    def _functional_residual(self, zeta, shift, other):
        up = self.gamma(zeta + shift)
        down = self.gamma(zeta - shift)
        exponential = cmath.exp(-1j * math.pi * zeta / other)
        return relative_residual(up, down * (1 + exponential), abs(down) * (1 + abs(exponential)))

    def shift_relation_residual(self, zeta):
        """
        gamma(z + omega_pp) / gamma(z - omega_pp)
            = -4 exp(2 pi i z omega_pp) sin(pi z / 2 omega_p) sin(pi z / 2 omega)
        """
        p = self.params
        zeta = complex(zeta)
        up = self.gamma(zeta + p.omega_pp)
        down = self.gamma(zeta - p.omega_pp)
        prefactor = -4 * cmath.exp(2j * math.pi * zeta * p.omega_pp)
        x1 = math.pi * zeta / (2 * p.omega_p)
        x2 = math.pi * zeta / (2 * p.omega)
        rhs = down * prefactor * cmath.sin(x1) * cmath.sin(x2)
        scale = abs(down * prefactor) * _sine_scale(x1) * _sine_scale(x2)
        return relative_residual(up, rhs, scale)

    def reflection_residual(self, zeta):
        """gamma(z) gamma(-z) exp(-i pi z^2) equals gamma(0)^2"""
        zeta = complex(zeta)
        product = self.gamma(zeta) * self.gamma(-zeta) * cmath.exp(-1j * math.pi * zeta * zeta)
        expected = self.gamma_at_origin() ** 2
        return relative_residual(product, expected, 0.0)

    def tabulate(self, points):
        """Rows (re zeta, im zeta, re gamma, im gamma, d1 residual, d2 residual)"""
        rows = []
        for zeta in points:
            zeta = complex(zeta)
            value = self.gamma(zeta)
            rows.append((
                zeta.real, zeta.imag, value.real, value.imag,
                self.d1_residual(zeta), self.d2_residual(zeta),
            ))
        return rows


def _sine_scale(x):
    """Magnitude of the exponentials making up sin(x)"""
    return 0.5 * (math.exp(-x.imag) + math.exp(x.imag))

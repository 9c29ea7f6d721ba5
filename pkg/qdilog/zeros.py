# qdilog/zeros.py

import logging
import math

import numpy as np

from params.models import Regime, RegimeError

from .dilog import PoleProximityError

logger = logging.getLogger(__name__)

# Smallest |f| on a contour, relative to the largest, before the count is refused
CONTOUR_GUARD = 1e-10


class ContourGuardError(ArithmeticError):
    """The sampled contour passes too close to a zero or is under-resolved"""


def circle_contour(center, radius, nodes=256):
    """Counter-clockwise vertices of a circle; the polyline closes on itself"""
    angles = np.linspace(0.0, 2.0 * math.pi, nodes, endpoint=False)
    return complex(center) + radius * np.exp(1j * angles)


def winding_number(f, contour, nodes=None):
    """
    Argument-principle count (zeros minus poles) of f inside a closed
    polyline. With nodes given, each edge is subdivided so the whole
    contour carries that many samples.
    """
    vertices = np.asarray(contour, dtype=complex)
    if nodes is not None and nodes > len(vertices):
        per_edge = int(math.ceil(nodes / len(vertices)))
        closed = np.append(vertices, vertices[0])
        t = np.linspace(0.0, 1.0, per_edge, endpoint=False)
        vertices = np.concatenate([
            a + (b - a) * t for a, b in zip(closed[:-1], closed[1:])
        ])

    values = np.array([f(z) for z in vertices], dtype=complex)
    magnitude = np.abs(values)
    if magnitude.min() <= CONTOUR_GUARD * magnitude.max():
        k = int(np.argmin(magnitude))
        raise ContourGuardError(f"|f| = {magnitude[k]:.3g} at {vertices[k]} on the contour")

    increments = np.angle(np.roll(values, -1) / values)
    if np.abs(increments).max() > 0.75 * math.pi:
        raise ContourGuardError("Contour under-resolved: phase jumps exceed 3pi/4 between samples")
    total = increments.sum() / (2.0 * math.pi)
    winding = int(round(total))
    if abs(total - winding) > 1e-6:
        raise ContourGuardError(f"Non-integer winding {total:.6f}")
    return winding


def level_windings(qdilog, n, radius_fraction=0.1, nodes=256):
    """
    (center, winding) for each zero of gamma at omega_pp + 2p*omega + 2q*omega_p
    with p + q = n - 1, every zero inside its own small contour
    """
    params = qdilog.params
    if params.regime != Regime.II:
        raise RegimeError("Zero levels are only separated in Regime II")
    if int(n) != n or n <= 0:
        raise ValueError(f"Level must be a positive integer, got {n}")
    n = int(n)

    radius = radius_fraction * params.mu
    windings = []
    for p in range(n):
        center = qdilog.zero_lattice(p, n - 1 - p)
        w = winding_number(qdilog.gamma, circle_contour(center, radius, nodes))
        logger.debug(f"Level {n}: winding {w} around {center}")
        windings.append((center, w))
    return windings


def count_zeros_on_level(qdilog, n, radius_fraction=0.1, nodes=256):
    """Zeros of gamma on level n, summed over the per-zero windings"""
    count = sum(w for _, w in level_windings(qdilog, n, radius_fraction, nodes))
    logger.info(f"Counted {count} zeros of gamma on level {n}")
    return count


def lower_strip_scan(qdilog, columns=6, rows=3, radius_fraction=0.2, nodes=256, re_extent=1.5):
    """
    Windings of gamma around small circles tiling Im z in (-2mu, 0).
    Circles whose rim passes near a pole are skipped. Returns the number
    of zeros and poles found.
    """
    mu = qdilog.params.mu
    radius = radius_fraction * mu
    zeros = poles = 0
    for y in np.linspace(-2 * mu + radius, -radius, rows):
        for x in np.linspace(-re_extent, re_extent, columns):
            center = complex(x, y)
            pole, distance = qdilog.nearest_pole(center)
            if pole is not None and abs(distance - radius) < 0.1 * mu:
                continue
            try:
                w = winding_number(qdilog.gamma, circle_contour(center, radius, nodes))
            except PoleProximityError:
                continue
            zeros += max(w, 0)
            poles += max(-w, 0)
    logger.info(f"Lower strip scan found {zeros} zeros and {poles} poles")
    return zeros, poles

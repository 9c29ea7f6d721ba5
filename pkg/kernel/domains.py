# kernel/domains.py

import cmath
import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from params.models import Regime, RegimeError

from .weights import phi_product, sine_square_form

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DomainDecomposition:
    """Zero lines y = mu*m of Phi(-2iy) and the n regions between them"""

    n: int
    levels: List[float]
    regions: List[Tuple[float, float]]

    def region_of(self, y):
        """1-based index of the region containing y; None on a zero line"""
        for index, (lo, hi) in enumerate(self.regions, start=1):
            if lo < y < hi:
                return index
        return None


def decompose_domains(n, params):
    if params.regime != Regime.II:
        raise RegimeError("Domain decomposition needs the finite zero set of Regime II")
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    n = int(n)
    levels = [params.mu * m for m in range(1, n)]
    edges = [-math.inf] + levels + [math.inf]
    regions = list(zip(edges[:-1], edges[1:]))
    return DomainDecomposition(n=n, levels=levels, regions=regions)


def locate_zero_lines(n, params, xatol=1e-12):
    """
    Zero lines of Phi(-2iy), each found on its own vanishing factor
    sin(pi(t + 2m omega_pp)/2 omega_p). |sin|^2 of that factor has a single
    minimum within a tenth of a level of y = m*mu.
    """
    mu = params.mu
    found = []
    for m in range(1, int(n)):
        level = m * mu

        def factor_square(offset, m=m, level=level):
            t = -2j * (level + offset)
            return abs(cmath.sin(math.pi * (t + 2 * m * params.omega_pp) / (2 * params.omega_p))) ** 2

        result = minimize_scalar(
            factor_square,
            bounds=(-0.1 * mu, 0.1 * mu),
            method='bounded',
            options={'xatol': xatol},
        )
        logger.debug(f"Zero line {m}: offset {result.x:.3e} from the level {level:.12g}")
        found.append(level + float(result.x))
    return found


@dataclass(frozen=True)
class PositivityReport:
    min_value: float
    max_imag_ratio: float
    samples: int
    max_square_form_defect: float

    @property
    def nonnegative(self):
        return self.min_value >= -1e-12


def positivity_scan(n, params, samples=1000, extent=3.0):
    """
    Scan phi_product on t = iy, |y| < extent*mu. The imaginary part is
    measured relative to |Phi| since Phi grows exponentially in y.
    """
    ys = np.linspace(-extent, extent, samples) * params.mu
    t = 1j * ys
    values = phi_product(t, n, params)
    magnitude = np.maximum(np.abs(values), 1.0)
    report = PositivityReport(
        min_value=float(values.real.min()),
        max_imag_ratio=float((np.abs(values.imag) / magnitude).max()),
        samples=int(samples),
        max_square_form_defect=float((np.abs(values - sine_square_form(t, n, params)) / magnitude).max()),
    )
    logger.info(
        f"Positivity scan n={n} ({params}): min Re Phi {report.min_value:.3e}, "
        f"max |Im Phi| ratio {report.max_imag_ratio:.1e}"
    )
    return report

# representation/functions.py

import cmath
import math

import numpy as np
from scipy.special import comb

# Terms whose betas agree this closely are merged
MERGE_TOL = 1e-12


class GEPFunction:
    """
    f(z) = sum c * exp(-sigma z^2 + beta z) * z^k

    The class is closed under multiplication by exp(gamma z) and under
    complex shifts, so every operator acts exactly on the coefficients.
    """

    def __init__(self, sigma, terms=()):
        if sigma <= 0:
            raise ValueError(f"Gaussian width must be positive, got {sigma}")
        self.sigma = float(sigma)
        self.terms = []
        for coeff, beta, k in terms:
            self._accumulate(complex(coeff), complex(beta), int(k))
        self.terms = [t for t in self.terms if t[0] != 0]

    def _accumulate(self, coeff, beta, k):
        if k < 0:
            raise ValueError(f"Power of z must be nonnegative, got {k}")
        for index, (c, b, j) in enumerate(self.terms):
            if j == k and abs(b - beta) <= MERGE_TOL * max(1.0, abs(beta)):
                self.terms[index] = (c + coeff, b, j)
                return
        self.terms.append((coeff, beta, k))

    @classmethod
    def gaussian(cls, sigma, beta=0j, k=0, coeff=1.0):
        return cls(sigma, [(coeff, beta, k)])

    def __repr__(self):
        return f"GEPFunction(sigma={self.sigma}, terms={len(self.terms)})"

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        value = np.zeros_like(z)
        gaussian = -self.sigma * z * z
        for coeff, beta, k in self.terms:
            value = value + coeff * np.exp(gaussian + beta * z) * z ** k
        return value if value.ndim else complex(value)

    def magnitude(self, z):
        """Sum of the term magnitudes, the scale for roundoff in f(z)"""
        z = np.asarray(z, dtype=complex)
        total = np.zeros(z.shape)
        gaussian = -self.sigma * z * z
        for coeff, beta, k in self.terms:
            total = total + np.abs(coeff * np.exp(gaussian + beta * z) * z ** k)
        return total if total.ndim else float(total)

    def _check_sigma(self, other):
        if self.sigma != other.sigma:
            raise ValueError(f"Gaussian widths differ: {self.sigma} vs {other.sigma}")

    def __add__(self, other):
        self._check_sigma(other)
        return GEPFunction(self.sigma, self.terms + other.terms)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        scalar = complex(scalar)
        return GEPFunction(self.sigma, [(scalar * c, b, k) for c, b, k in self.terms])

    __rmul__ = __mul__

    def multiply_exp(self, gamma):
        """exp(gamma z) f(z)"""
        return GEPFunction(self.sigma, [(c, b + gamma, k) for c, b, k in self.terms])

    def shift(self, h):
        """
        f(z + h): exp(-sigma(z+h)^2 + beta(z+h)) (z+h)^k
            = exp(-sigma h^2 + beta h) exp(-sigma z^2 + (beta - 2 sigma h) z) sum_j C(k,j) h^(k-j) z^j
        """
        h = complex(h)
        terms = []
        for c, b, k in self.terms:
            scale = c * cmath.exp(-self.sigma * h * h + b * h)
            new_beta = b - 2 * self.sigma * h
            for j in range(k + 1):
                terms.append((scale * comb(k, j, exact=True) * h ** (k - j), new_beta, j))
        return GEPFunction(self.sigma, terms)

    def conjugate(self):
        """f*(z) = conj(f(conj z)): conjugated coefficients and betas"""
        return GEPFunction(self.sigma, [(c.conjugate(), b.conjugate(), k) for c, b, k in self.terms])

    def max_coefficient(self):
        return max((abs(c) for c, _, _ in self.terms), default=0.0)

    def is_close(self, other, tol=1e-12):
        """Coefficient-level comparison relative to the larger function"""
        scale = max(self.max_coefficient(), other.max_coefficient(), 1e-300)
        return (self - other).max_coefficient() <= tol * scale


def centered_basis(size, y_center, sigma=1.0):
    """
    z^k exp(-sigma z^2 + beta z), k < size, with beta = 2 pi y_c + 2i sigma y_c.
    The real part of beta balances the exp(-4 pi x y) factor of the kernel
    on the line y = y_c.
    """
    beta = complex(2 * math.pi * y_center, 2 * sigma * y_center)
    return [GEPFunction.gaussian(sigma, beta, k) for k in range(size)]


def random_gep(rng, sigma=1.0, size=3, max_power=3):
    """Random combination of Gaussians with small complex betas"""
    terms = []
    for _ in range(size):
        coeff = complex(*rng.normal(size=2))
        beta = complex(*rng.uniform(-1, 1, size=2))
        terms.append((coeff, beta, int(rng.integers(0, max_power + 1))))
    return GEPFunction(sigma, terms)

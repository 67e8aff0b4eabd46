"""Exact Steklov spectrum of the annulus {eps < |z| < 1} by separation of variables.

For angular mode n >= 1 write u = (a r^n + b r^-n) cos(n theta) and put
B = b eps^-n.  The boundary conditions (d/dr on r = 1, -d/dr on r = eps)
give the 2x2 pencil

    [[n - s,            -p (n + s)     ],   [a]
     [-p (n + eps s),    n - eps s     ]] . [B] = 0,     p = eps^n,

whose determinant, divided by (1 - p^2), is the quadratic

    eps s^2 - n (1 + eps) coth(n log(1/eps)) s + n^2 = 0.

Mode n = 0 (u = a + b log r) gives s = 0 and s = (1 + eps) / (eps log(1/eps)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EpsilonOutOfRange
from .geometry import Spectrum


def _check_eps(epsilon: float) -> None:
    if not 0 < epsilon < 1:
        raise EpsilonOutOfRange(f"epsilon must lie in (0, 1), got {epsilon}")


@dataclass(frozen=True)
class AnnulusModeProblem:
    epsilon: float
    n: int

    def matrix(self, sigma: float) -> np.ndarray:
        """Coefficient matrix of the boundary conditions at spectral parameter ``sigma``."""
        eps, n = self.epsilon, self.n
        if n == 0:
            # unknowns (a, b) of u = a + b log r
            return np.array([[-sigma, 1.0], [-sigma, -1.0 / eps - sigma * math.log(eps)]])
        p = eps ** n
        return np.array([[n - sigma, -p * (n + sigma)], [-p * (n + eps * sigma), n - eps * sigma]])

    def determinant(self, sigma: float) -> float:
        return float(np.linalg.det(self.matrix(sigma)))


def annulus_mode_eigenvalues(epsilon: float, n: int) -> tuple:
    """The two Steklov eigenvalues (sorted) carried by angular mode ``n``."""
    _check_eps(epsilon)
    if n < 0:
        raise ValueError("mode index must be non-negative")
    if n == 0:
        return 0.0, (1 + epsilon) / (epsilon * math.log(1 / epsilon))
    coth = 1 / math.tanh(n * math.log(1 / epsilon))
    half_b = 0.5 * n * (1 + epsilon) * coth
    disc = half_b * half_b - epsilon * n * n
    # larger root without cancellation, smaller one from the product n^2 / eps
    hi = (half_b + math.sqrt(disc)) / epsilon
    lo = n * n / (epsilon * hi)
    return lo, hi


def annulus_length(epsilon: float) -> float:
    return 2 * math.pi * (1 + epsilon)


def steklov_spectrum_annulus(epsilon: float, k_max: int) -> Spectrum:
    """Merged eigenvalues sigma_0..sigma_{k_max}, modes n >= 1 counted twice."""
    _check_eps(epsilon)
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    values = list(annulus_mode_eigenvalues(epsilon, 0))
    n = 0
    while True:
        n += 1
        lo, hi = annulus_mode_eigenvalues(epsilon, n)
        current = sorted(values)
        if len(current) > k_max and lo > current[k_max]:
            # every mode beyond n has an even larger lower eigenvalue
            break
        values += [lo, lo, hi, hi]
    values = np.sort(values)[: k_max + 1]
    assert annulus_mode_eigenvalues(epsilon, n + 1)[0] > values[-1]
    return Spectrum(values, "annulus", n, k_max, annulus_length(epsilon))

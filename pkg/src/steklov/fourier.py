"""Steklov spectra of Phi(D) by Fourier-Galerkin discretization.

On the unit circle the problem reads  Lambda_D f = sigma |Phi'| f,  where the
disk Dirichlet-to-Neumann map acts as |n| on e^{i n theta}.  In the
orthonormal real basis

    1/sqrt(2 pi),  cos(n theta)/sqrt(pi),  sin(n theta)/sqrt(pi),  n = 1..N

the stiffness matrix is diag(0, 1, 1, 2, 2, ...) and the mass matrix is the
Gram matrix of the weight, a Toeplitz-plus-Hankel matrix built from the FFT
of the weight samples.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conformal import BoundaryWeight, ConformalMap, boundary_weight
from .errors import InsufficientQuadrature
from .geometry import Spectrum, grid
from .numerics import generalized_symmetric_eig

OVERSAMPLING = 8


@dataclass(frozen=True)
class GalerkinPair:
    A: np.ndarray
    B: np.ndarray
    N: int
    M: int


def basis_frequencies(N: int) -> np.ndarray:
    """Frequency of each basis function in the order 1, cos 1, sin 1, cos 2, ..."""
    return np.concatenate([[0], np.repeat(np.arange(1, N + 1), 2)])


def basis_matrix(N: int, theta) -> np.ndarray:
    """Orthonormal real Fourier basis sampled at ``theta`` (rows) by basis index (columns)."""
    theta = np.asarray(theta, dtype=float)
    n = np.arange(1, N + 1)
    E = np.empty((len(theta), 2 * N + 1))
    E[:, 0] = 1 / np.sqrt(2 * np.pi)
    E[:, 1::2] = np.cos(np.multiply.outer(theta, n)) / np.sqrt(np.pi)
    E[:, 2::2] = np.sin(np.multiply.outer(theta, n)) / np.sqrt(np.pi)
    return E


def weighted_gram(samples: np.ndarray, N: int) -> np.ndarray:
    """Gram matrix int w e_j e_k dtheta from the FFT of the weight samples."""
    M = len(samples)
    # I[k] = int_0^{2pi} w(theta) e^{-i k theta} dtheta (trapezoid)
    I = np.fft.fft(samples) * (2 * np.pi / M)

    def cos_int(k):
        return I[np.mod(k, M)].real

    def sin_int(k):
        return -I[np.mod(k, M)].imag

    a = np.arange(1, N + 1)
    ai, bj = np.meshgrid(a, a, indexing="ij")
    B = np.empty((2 * N + 1, 2 * N + 1))
    B[0, 0] = cos_int(0) / (2 * np.pi)
    s = 1 / np.sqrt(2 * np.pi ** 2)
    B[0, 1::2] = B[1::2, 0] = cos_int(a) * s
    B[0, 2::2] = B[2::2, 0] = sin_int(a) * s
    cc = 0.5 * (cos_int(ai - bj) + cos_int(ai + bj)) / np.pi
    ss = 0.5 * (cos_int(ai - bj) - cos_int(ai + bj)) / np.pi
    # cos(a) sin(b) = (sin((a+b)) - sin((a-b))) / 2
    cs = 0.5 * (sin_int(ai + bj) - sin_int(ai - bj)) / np.pi
    B[1::2, 1::2] = cc
    B[2::2, 2::2] = ss
    B[1::2, 2::2] = cs
    B[2::2, 1::2] = cs.T
    return B


def dtn_matrix(weight: BoundaryWeight, N: int) -> GalerkinPair:
    if weight.M < OVERSAMPLING * N:
        raise InsufficientQuadrature(f"M = {weight.M} < {OVERSAMPLING} N = {OVERSAMPLING * N}")
    A = np.diag(basis_frequencies(N).astype(float))
    return GalerkinPair(A, weighted_gram(weight.samples, N), N, weight.M)


def _grid_size(N: int) -> int:
    M = 64
    while M < OVERSAMPLING * N:
        M *= 2
    return M


def steklov_spectrum_fourier(phi: ConformalMap, N: int = 64, k_max: int = 10) -> Spectrum:
    """Eigenvalues sigma_0..sigma_{k_max}; the first floor(N/4) are trusted.

    Eigenvectors are returned as coefficient columns in the real basis.
    """
    if k_max > 2 * N:
        raise ValueError(f"k_max = {k_max} exceeds basis size {2 * N + 1}")
    weight = boundary_weight(phi, _grid_size(N))
    pair = dtn_matrix(weight, N)
    res = generalized_symmetric_eig(pair.A, pair.B)
    values = np.clip(res.eigenvalues[: k_max + 1], 0.0, None)
    return Spectrum(values, "fourier", N, min(k_max, N // 4), weight.mass,
                    res.eigenvectors[:, : k_max + 1])


def eigenfunction_samples(spectrum: Spectrum, theta) -> np.ndarray:
    """Evaluate Fourier-solver eigenvectors at disk angles ``theta`` (rows) per mode (columns)."""
    N = spectrum.resolution
    return basis_matrix(N, theta) @ spectrum.vectors


@dataclass(frozen=True)
class ConvergenceReport:
    N: int
    drift: np.ndarray  # relative change of sigma_1..sigma_trusted between N and 2N
    max_drift: float


def convergence_report(phi: ConformalMap, N: int, k_max: int) -> ConvergenceReport:
    coarse = steklov_spectrum_fourier(phi, N, k_max)
    fine = steklov_spectrum_fourier(phi, 2 * N, k_max)
    k = coarse.trusted_count
    a, b = coarse.values[1:k + 1], fine.values[1:k + 1]
    drift = np.abs(a - b) / np.abs(b)
    return ConvergenceReport(N, drift, float(drift.max()) if len(drift) else 0.0)



"""Simply connected domains given as images of the unit disk.

The domain is Phi(D) for a polynomial map Phi(z) = sum_{n>=1} a_n z^n.
Pulling the Steklov problem back through Phi turns it into a problem on the
unit circle with boundary weight |Phi'(e^{i theta})|.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from shapely.geometry import LinearRing

from .errors import NotUnivalent
from .geometry import BoundaryCurve, curve_from_fourier, grid


@dataclass(frozen=True)
class ConformalMap:
    taylor: np.ndarray  # a_1 .. a_K
    validated_univalent: bool = False

    @classmethod
    def from_taylor(cls, taylor, normalize: bool = True, validate: bool = True) -> "ConformalMap":
        a = np.asarray(taylor, dtype=complex).ravel()
        if len(a) == 0:
            raise ValueError("empty Taylor coefficient list")
        phi = cls(a)
        if normalize and a[0] != 0:
            phi = phi.rotated_argument(-np.angle(a[0]))
        if validate:
            phi = replace(phi, validated_univalent=validate_univalence(phi))
        return phi

    @property
    def degree(self) -> int:
        return len(self.taylor)

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.polynomial.polynomial.polyval(z, np.concatenate([[0], self.taylor]))

    def derivative(self, z) -> np.ndarray:
        n = np.arange(1, len(self.taylor) + 1)
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), n * self.taylor)

    def rotated_argument(self, phi: float) -> "ConformalMap":
        """Precompose with z -> e^{i phi} z (same image domain)."""
        n = np.arange(1, len(self.taylor) + 1)
        return ConformalMap(self.taylor * np.exp(1j * n * phi), self.validated_univalent)

    def scaled(self, c: float) -> "ConformalMap":
        return ConformalMap(self.taylor * c, self.validated_univalent)

    def boundary_curve(self) -> BoundaryCurve:
        """The image of the unit circle as a positively oriented Fourier curve."""
        return curve_from_fourier(self.taylor, "positive", offset=1)

    def to_json(self) -> dict:
        return {"type": "conformal", "taylor": [[float(a.real), float(a.imag)] for a in self.taylor]}


def validate_univalence(phi: ConformalMap, n_radii: int = 65, n_angles: int = 1024,
                        boundary_points: int = 16384) -> bool:
    """Grid screening: Phi' nonvanishing on a polar grid and a simple boundary image.

    A True answer means "validated at this resolution", not a proof.
    """
    if phi.taylor[0] == 0 and np.allclose(phi.taylor, 0):
        return False
    r = np.linspace(0.0, 1.0, n_radii)
    z = np.multiply.outer(r, np.exp(1j * grid(n_angles)))
    dphi = np.abs(phi.derivative(z))
    if dphi.min() <= 1e-10 * dphi.max():
        return False
    pts = phi(np.exp(1j * grid(boundary_points)))
    return bool(LinearRing(np.column_stack([pts.real, pts.imag])).is_simple)


@dataclass(frozen=True)
class BoundaryWeight:
    samples: np.ndarray
    M: int

    @property
    def mass(self) -> float:
        return float(self.samples.sum() * 2 * np.pi / self.M)


def boundary_weight(phi: ConformalMap, M: int) -> BoundaryWeight:
    """Samples of |Phi'(e^{i theta_j})| on the uniform grid theta_j = 2 pi j / M."""
    if M < 64 or M & (M - 1):
        raise ValueError(f"M must be a power of two >= 64, got {M}")
    if not phi.validated_univalent:
        raise NotUnivalent("map has not passed univalence validation")
    w = np.abs(phi.derivative(np.exp(1j * grid(M))))
    if np.any(w <= 0):
        raise NotUnivalent("|Phi'| vanishes on the unit circle")
    return BoundaryWeight(w, M)

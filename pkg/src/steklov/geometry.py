"""Boundary curves, planar domains and the Spectrum record.

A boundary curve is a trigonometric polynomial

    z(t) = sum_{n=offset}^{offset+len-1} c_n exp(i n t),   t in [0, 2*pi),

so derivatives are exact and periodic trapezoid quadrature is spectrally
accurate.  Domains keep the interior on the left of every curve: the outer
curve runs counter-clockwise, holes run clockwise.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from shapely.geometry import LinearRing

from .errors import (
    DegenerateCurve,
    GenusUnsupported,
    HoleOutsideOuter,
    HolesOverlap,
    OrientationMismatch,
    SelfIntersection,
)

logger = logging.getLogger(__name__)

DEFAULT_GRID = 1024
VALIDATION_GRID = 16384
_REGULARITY_RTOL = 1e-8

_ORIENTATIONS = {"+": "positive", "positive": "positive", "-": "negative", "negative": "negative"}


def _normalize_orientation(orientation: str) -> str:
    try:
        return _ORIENTATIONS[orientation]
    except KeyError:
        raise ValueError(f"unknown orientation {orientation!r}") from None


@dataclass(frozen=True)
class BoundaryCurve:
    coeffs: np.ndarray
    offset: int
    orientation: str = "positive"

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + len(self.coeffs))

    def _series(self, t, order: int = 0) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        n = self.frequencies
        weights = self.coeffs * (1j * n) ** order
        return np.exp(1j * np.multiply.outer(t, n)) @ weights

    def z(self, t) -> np.ndarray:
        return self._series(t, 0)

    def dz(self, t) -> np.ndarray:
        return self._series(t, 1)

    def d2z(self, t) -> np.ndarray:
        return self._series(t, 2)

    def signed_area(self) -> float:
        n = self.frequencies
        return float(np.pi * np.sum(n * np.abs(self.coeffs) ** 2))

    def points(self, M: int) -> np.ndarray:
        return self.z(grid(M))

    def scaled(self, c: float) -> "BoundaryCurve":
        return BoundaryCurve(self.coeffs * c, self.offset, self.orientation)

    def shifted(self, w: complex) -> "BoundaryCurve":
        """Translate the curve by the complex number ``w``."""
        n = self.frequencies
        coeffs = self.coeffs.astype(complex).copy()
        if 0 in n:
            coeffs[list(n).index(0)] += w
            return BoundaryCurve(coeffs, self.offset, self.orientation)
        lo, hi = min(self.offset, 0), max(self.offset + len(coeffs) - 1, 0)
        full = np.zeros(hi - lo + 1, dtype=complex)
        full[self.offset - lo:self.offset - lo + len(coeffs)] = coeffs
        full[-lo] += w
        return BoundaryCurve(full, lo, self.orientation)

    def to_json(self) -> dict:
        return {
            "orientation": "+" if self.orientation == "positive" else "-",
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
            "offset": int(self.offset),
        }


def grid(M: int) -> np.ndarray:
    """Uniform periodic grid t_j = 2*pi*j/M."""
    return 2 * np.pi * np.arange(M) / M


def curve_from_fourier(coeffs, orientation: str = "positive", offset: Optional[int] = None,
                       validate: bool = True) -> BoundaryCurve:
    """Build and validate a curve from coefficients c_offset, ..., c_{offset+len-1}.

    With ``offset=None`` the list is read as the symmetric block c_{-K}..c_K.
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    if offset is None:
        if len(c) % 2 == 0:
            raise ValueError("symmetric coefficient list must have odd length 2K+1")
        offset = -(len(c) // 2)
    if not np.any(c != 0):
        raise DegenerateCurve("all coefficients vanish")
    K = max(abs(offset), abs(offset + len(c) - 1))
    if K < 1:
        raise DegenerateCurve("constant curve (K = 0)")
    curve = BoundaryCurve(c, int(offset), _normalize_orientation(orientation))
    if validate:
        validate_curve(curve)
    return curve


def validate_curve(curve: BoundaryCurve, M: int = VALIDATION_GRID) -> None:
    t = grid(M)
    speed = np.abs(curve.dz(t))
    if speed.min() <= _REGULARITY_RTOL * max(speed.max(), 1e-300):
        raise DegenerateCurve(f"z'(t) vanishes near t = {t[np.argmin(speed)]:.6f}")
    pts = curve.z(t)
    # resolution-limited: a crossing finer than the polyline spacing goes unseen
    ring = LinearRing(np.column_stack([pts.real, pts.imag]))
    if not ring.is_simple:
        raise SelfIntersection(f"curve self-intersects at resolution {M}")
    area = curve.signed_area()
    expected = 1 if curve.orientation == "positive" else -1
    if np.sign(area) != expected:
        raise OrientationMismatch(f"signed area {area:.6g} contradicts orientation {curve.orientation}")


def circle(center: complex = 0.0, radius: float = 1.0, orientation: str = "positive") -> BoundaryCurve:
    orientation = _normalize_orientation(orientation)
    if orientation == "positive":
        return curve_from_fourier([center, radius], orientation, offset=0)
    return curve_from_fourier([radius, center], orientation, offset=-1)


def ellipse(a: float, b: float, center: complex = 0.0, orientation: str = "positive") -> BoundaryCurve:
    """Axis-aligned ellipse with semi-axes a (along x) and b (along y)."""
    cp, cm = (a + b) / 2, (a - b) / 2
    if _normalize_orientation(orientation) == "negative":
        cp, cm = cm, cp
    return curve_from_fourier([cm, center, cp], orientation)


def arclength(curve: BoundaryCurve, M: int = DEFAULT_GRID) -> float:
    """Length of the curve by the periodic trapezoid rule on M nodes."""
    return float(np.sum(np.abs(curve.dz(grid(M)))) * 2 * np.pi / M)


def winding_number(curve: BoundaryCurve, points, M: int = 2048) -> np.ndarray:
    """Winding number of the sampled curve around each query point."""
    verts = curve.points(M)
    q = np.atleast_1d(np.asarray(points, dtype=complex))
    d = verts[None, :] - q[:, None]
    turn = np.angle(np.roll(d, -1, axis=1) / d)
    return np.rint(turn.sum(axis=1) / (2 * np.pi)).astype(int)


@dataclass(frozen=True)
class DomainSpec:
    outer: BoundaryCurve
    holes: tuple = ()
    genus: int = 0
    l: int = 1
    L: float = 2 * np.pi

    @property
    def curves(self) -> list:
        return [self.outer, *self.holes]

    def require_planar(self) -> None:
        if self.genus != 0:
            raise GenusUnsupported(f"solvers are planar; genus {self.genus} requested")

    def scaled(self, c: float) -> "DomainSpec":
        return assemble_domain(self.outer.scaled(c), [h.scaled(c) for h in self.holes], self.genus)

    def to_json(self) -> dict:
        return {"genus": self.genus, "curves": [c.to_json() for c in self.curves]}


def assemble_domain(outer: BoundaryCurve, holes: Sequence[BoundaryCurve] = (), genus: int = 0,
                    sample: int = 256) -> DomainSpec:
    if outer.orientation != "positive":
        raise OrientationMismatch("outer curve must be positively oriented")
    holes = tuple(holes)
    for h in holes:
        if h.orientation != "negative":
            raise OrientationMismatch("holes must be negatively oriented")
        # a clockwise outer traversal would give -1; the outer is counter-clockwise here
        if np.any(winding_number(outer, h.points(sample)) != 1):
            raise HoleOutsideOuter("hole boundary not strictly inside the outer curve")
    outer_ring = LinearRing(_xy(outer.points(4096)))
    for i, h in enumerate(holes):
        if LinearRing(_xy(h.points(4096))).intersects(outer_ring):
            raise HoleOutsideOuter(f"hole {i} touches the outer curve")
    for i in range(len(holes)):
        for j in range(i + 1, len(holes)):
            hi, hj = holes[i], holes[j]
            if (np.any(winding_number(hi, hj.points(sample)) != 0)
                    or np.any(winding_number(hj, hi.points(sample)) != 0)
                    or LinearRing(_xy(hi.points(4096))).intersects(LinearRing(_xy(hj.points(4096))))):
                raise HolesOverlap(f"holes {i} and {j} overlap")
    if genus < 0:
        raise ValueError("genus must be non-negative")
    L = sum(arclength(c) for c in (outer, *holes))
    return DomainSpec(outer, holes, int(genus), 1 + len(holes), L)


def _xy(pts: np.ndarray) -> np.ndarray:
    return np.column_stack([pts.real, pts.imag])


def curve_from_json(obj: dict) -> BoundaryCurve:
    coeffs = [complex(re, im) for re, im in obj["coeffs"]]
    offset = obj.get("offset")
    return curve_from_fourier(coeffs, obj.get("orientation", "+"), offset=offset)


def domain_from_json(obj) -> DomainSpec:
    """Parse the curve-list domain format (first curve is the outer one)."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    curves = [curve_from_json(c) for c in obj["curves"]]
    if not curves:
        raise ValueError("domain needs at least one curve")
    return assemble_domain(curves[0], curves[1:], obj.get("genus", 0))


@dataclass(frozen=True)
class Spectrum:
    """Sorted Steklov eigenvalues sigma_0 <= sigma_1 <= ... of one solve.

    ``vectors`` optionally holds eigenvectors (columns) in the solver's own
    discretization and ``L`` the boundary length of the domain.
    """

    values: np.ndarray
    solver: str
    resolution: int
    trusted_count: int
    L: float = float("nan")
    vectors: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or len(v) == 0:
            raise ValueError("spectrum needs at least sigma_0")
        if np.any(v < -1e-10):
            raise ValueError(f"negative eigenvalue {v.min():.3e}")
        if np.any(np.diff(v) < -1e-12 * max(1.0, float(np.abs(v).max()))):
            raise ValueError("eigenvalues not sorted")
        if len(v) > 1 and v[0] > 1e-8 * max(1.0, v[1]):
            raise ValueError(f"sigma_0 = {v[0]:.3e} is not zero")
        if self.trusted_count > len(v):
            raise ValueError("trusted_count exceeds number of values")
        object.__setattr__(self, "values", v)

    @property
    def trusted(self) -> np.ndarray:
        """sigma_0 .. sigma_{trusted_count}, i.e. trusted_count nonzero eigenvalues."""
        return self.values[: self.trusted_count + 1]

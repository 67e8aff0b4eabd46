"""Dense eigensolvers and scalar root bracketing behind stable contracts."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
from scipy.optimize import brentq

from .errors import NoSignChange, NotPositiveDefinite, NotSymmetric

SYMMETRY_RTOL = 1e-12


@dataclass(frozen=True)
class SymmetricEigenResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual: float


def _check_symmetric(A: np.ndarray, name: str) -> None:
    scale = max(np.abs(A).max(), 1e-300)
    if np.abs(A - A.T).max() > SYMMETRY_RTOL * scale:
        raise NotSymmetric(f"{name} is not symmetric")


def generalized_symmetric_eig(A, B=None) -> SymmetricEigenResult:
    """Full spectrum of A v = lambda B v for symmetric A and SPD B.

    Eigenvectors are B-orthonormal.  ``residual`` is
    max_i ||A v_i - lambda_i B v_i|| / ||A||.
    """
    A = np.asarray(A, dtype=float)
    _check_symmetric(A, "A")
    if B is None:
        lam, V = la.eigh(A)
        B_ = np.eye(len(A))
    else:
        B_ = np.asarray(B, dtype=float)
        _check_symmetric(B_, "B")
        try:
            la.cholesky(B_, lower=True)
        except la.LinAlgError as exc:
            raise NotPositiveDefinite(str(exc)) from None
        lam, V = la.eigh(A, B_)
    norm_a = max(np.linalg.norm(A, 2), 1e-300)
    res = np.linalg.norm(A @ V - (B_ @ V) * lam, axis=0).max() / norm_a
    return SymmetricEigenResult(lam, V, float(res))


def symmetric_eig(A) -> SymmetricEigenResult:
    return generalized_symmetric_eig(A)


def bracketed_root(f, a: float, b: float, tol: float = 1e-12) -> float:
    """Root of f in [a, b] to absolute tolerance ``tol`` (Brent's method)."""
    fa, fb = f(a), f(b)
    if fa == 0:
        return float(a)
    if fb == 0:
        return float(b)
    if np.sign(fa) == np.sign(fb):
        raise NoSignChange(f"f({a}) = {fa:.3e} and f({b}) = {fb:.3e} have the same sign")
    return float(brentq(f, a, b, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500))

"""Nystrom single-layer discretization of the Dirichlet-to-Neumann map.

Harmonic functions in the domain are represented as  u = S phi + C  with
G(x, y) = -log|x - y| / (2 pi) and the side condition  int phi ds = 0,
which keeps the system invertible for every curve system (including curves
of unit logarithmic capacity).  The interior normal derivative of the
single layer is (I/2 + K') phi, with K' the adjoint double-layer operator.

Self-interaction of the log kernel uses Kress's periodic product
quadrature; everything else is the periodic trapezoid rule.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .errors import SingularSystem, TooFewNodes
from .geometry import DomainSpec, Spectrum, grid
from .numerics import generalized_symmetric_eig

logger = logging.getLogger(__name__)

ASYMMETRY_LIMIT = 1e-6


def kress_weights(M: int) -> np.ndarray:
    """R(t_i - t_j) for int log(4 sin^2((t - s)/2)) g(s) ds ~ sum_j R_j g(s_j).

    Returned as the first column of the circulant, indexed by (i - j) mod M.
    """
    n = M // 2
    tau = grid(M)
    m = np.arange(1, n)
    R = -(2 * np.pi / n) * (np.cos(np.multiply.outer(tau, m)) / m).sum(axis=1)
    R -= (np.pi / n ** 2) * np.cos(n * tau)
    return R


@dataclass(frozen=True)
class LayerSystem:
    nodes: np.ndarray       # all boundary nodes, components concatenated
    normals: np.ndarray     # outward unit normals (out of the domain)
    weights: np.ndarray     # |z'(t_j)| 2 pi / M
    component: np.ndarray   # component index of each node
    G: np.ndarray           # symmetric single-layer kernel matrix, S = G diag(weights)
    Kp: np.ndarray          # adjoint double layer, weights included
    M: int
    condition: float

    @property
    def S(self) -> np.ndarray:
        return self.G * self.weights[None, :]

    def augmented(self) -> np.ndarray:
        n = len(self.nodes)
        A = np.zeros((n + 1, n + 1))
        A[:n, :n] = self.S
        A[:n, n] = 1.0
        A[n, :n] = self.weights
        return A


def build_layer_system(domain: DomainSpec, M: int = 128) -> LayerSystem:
    domain.require_planar()
    if M < 64 or M % 2:
        raise TooFewNodes(f"M must be even and >= 64, got {M}")
    t = grid(M)
    h = 2 * np.pi / M
    R = kress_weights(M)
    idx = np.arange(M)
    R_mat = R[np.mod(idx[:, None] - idx[None, :], M)]
    log2sin = np.log(np.abs(2 * np.sin((t[:, None] - t[None, :]) / 2)) + np.eye(M))

    pts, nrm, spd, curv, comp = [], [], [], [], []
    for c, curve in enumerate(domain.curves):
        dz = curve.dz(t)
        s = np.abs(dz)
        n = -1j * dz / s  # interior lies to the left of every curve
        pts.append(curve.z(t))
        nrm.append(n)
        spd.append(s)
        # limit of (x - y).n_x / |x - y|^2 as y -> x along the curve
        curv.append(-np.real(curve.d2z(t) * np.conj(n)) / (2 * s ** 2))
        comp.append(np.full(M, c))
    x, nx, s, lim, comp = (np.concatenate(a) for a in (pts, nrm, spd, curv, comp))
    w = s * h
    N = len(x)

    diff = x[:, None] - x[None, :]
    same = comp[:, None] == comp[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        logr = np.log(np.abs(diff))
        dnx = np.real(diff * np.conj(nx)[:, None]) / np.abs(diff) ** 2

    G = np.empty((N, N))
    G[~same] = -logr[~same] / (2 * np.pi)
    Kp = np.where(same, 0.0, -dnx / (2 * np.pi))
    for c in range(len(domain.curves)):
        sl = slice(c * M, (c + 1) * M)
        smooth = logr[sl, sl] - log2sin
        smooth[idx, idx] = np.log(s[sl])
        # Kress: log|x-y| = log|2 sin((t-s)/2)| + smooth part; the trapezoid
        # weight h is applied to the smooth part here, the speed later
        G[sl, sl] = -(0.5 * R_mat + h * smooth) / (2 * np.pi * h)
        block = -dnx[sl, sl] / (2 * np.pi)
        block[idx, idx] = -lim[sl] / (2 * np.pi)
        Kp[sl, sl] = block
    Kp = Kp * w[None, :]

    asym = np.abs(G - G.T).max() / np.abs(G).max()
    if asym > 1e-10:
        logger.warning("single-layer asymmetry %.2e before symmetrization", asym)
    G = 0.5 * (G + G.T)
    system = LayerSystem(x, nx, w, comp, G, Kp, M, 0.0)
    cond = float(np.linalg.cond(system.augmented()))
    logger.debug("augmented single-layer condition number %.3e", cond)
    return LayerSystem(x, nx, w, comp, G, Kp, M, cond)


@dataclass(frozen=True)
class DtnMatrix:
    D: np.ndarray
    weights: np.ndarray


def dtn_bem(system: LayerSystem) -> DtnMatrix:
    """D f = (I/2 + K') phi, where S phi + C = f and sum(w phi) = 0."""
    n = len(system.nodes)
    if not np.isfinite(system.condition) or system.condition > 1e13:
        raise SingularSystem(f"augmented system condition number {system.condition:.3e}")
    rhs = np.vstack([np.eye(n), np.zeros((1, n))])
    try:
        sol = la.solve(system.augmented(), rhs)
    except la.LinAlgError as exc:
        raise SingularSystem(str(exc)) from None
    P = sol[:n]
    D = 0.5 * P + system.Kp @ P
    return DtnMatrix(D, system.weights)


def steklov_spectrum_bem(domain: DomainSpec, M: int = 128, k_max: int = 8) -> Spectrum:
    """Eigenvalues of the symmetrized pencil (W D) v = sigma W v."""
    if k_max > M // 8:
        raise ValueError(f"k_max = {k_max} exceeds trusted band M/8 = {M // 8}")
    dtn = dtn_bem(build_layer_system(domain, M))
    W = dtn.weights
    T = W[:, None] * dtn.D
    defect = np.abs(T - T.T).max() / np.abs(T).max()
    logger.info("W D asymmetry %.2e (M = %d)", defect, M)
    if defect > ASYMMETRY_LIMIT:
        raise SingularSystem(f"W D asymmetry {defect:.2e} exceeds {ASYMMETRY_LIMIT}")
    res = generalized_symmetric_eig(0.5 * (T + T.T), np.diag(W))
    values = np.clip(res.eigenvalues[: k_max + 1], 0.0, None)
    return Spectrum(values, "bem", M, k_max, float(W.sum()), res.eigenvectors[:, : k_max + 1])

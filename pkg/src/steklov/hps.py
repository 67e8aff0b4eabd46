"""Test-function machinery behind the isoperimetric bounds, and the bounds themselves.

A surface Sigma = Phi(D) is mapped onto the disk by the branched cover
psi = (Phi^{-1})^d of degree d.  Circle test functions f = h(m(theta)) are
built from string modes h and the mass parameter m (cumulative push-forward
of boundary arclength), extended harmonically into the disk together with a
mu-normalized harmonic conjugate, and lifted to Sigma through psi.

Everything on the circle lives on one uniform grid theta_j = 2 pi j / M and
is handled spectrally (FFT coefficients, trapezoid rule).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg as la

from .conformal import ConformalMap
from .errors import BadParameters, BranchOnBoundary, ZeroDenominator
from .fourier import eigenfunction_samples
from .geometry import Spectrum, grid

DEFAULT_M = 1024


# --- covers and the mass parameter ----------------------------------------

@dataclass(frozen=True)
class CoverMap:
    """psi = (.)^power o Phi^{-1} : Phi(D) -> D, a proper cover of degree ``degree``."""

    degree: int
    inner: ConformalMap
    power: int = 0
    gamma: Optional[int] = None
    l: Optional[int] = None

    def __post_init__(self):
        if self.degree < 1:
            raise BadParameters("cover degree must be >= 1")
        if self.power == 0:
            object.__setattr__(self, "power", self.degree)
        if self.power != self.degree:
            raise BadParameters("degree must equal the power of the test-family cover")
        if (self.gamma is None) != (self.l is None):
            raise BadParameters("supply both genus and boundary count, or neither")
        if self.gamma is not None and self.degree > self.gamma + self.l:
            raise BadParameters(f"degree {self.degree} exceeds genus + boundary count = {self.gamma + self.l}")

    def boundary_correspondence(self, M: int) -> tuple:
        """Boundary parameter phi of Sigma and its unwrapped image angle d*phi."""
        phi = grid(M)
        return phi, self.degree * phi


def make_cover(degree: int = 1, taylor=(1.0,), gamma=None, l=None) -> CoverMap:
    return CoverMap(degree, ConformalMap.from_taylor(taylor), gamma=gamma, l=l)


@dataclass(frozen=True)
class MassParameter:
    theta: np.ndarray     # M + 1 points on [0, 2 pi], endpoint included
    m: np.ndarray         # m(theta), m(0) = 0, m(2 pi) = L
    density: np.ndarray   # m'(theta_j) on the periodic grid (M points)
    L: float

    @property
    def M(self) -> int:
        return len(self.density)

    def integrate(self, g) -> float:
        """int_{S^1} g dmu for samples g on the periodic grid."""
        return float(np.sum(np.asarray(g) * self.density) * 2 * np.pi / self.M)

    @property
    def values(self) -> np.ndarray:
        """m on the periodic grid."""
        return self.m[:-1]


def mass_parameter(cover: CoverMap, M: int = DEFAULT_M) -> MassParameter:
    """Cumulative push-forward of arclength of Phi(S^1) through psi."""
    if M < 256:
        raise ValueError("mass parameter needs M >= 256")
    d = cover.degree
    # preimages of theta_i under z -> z^d are (theta_i + 2 pi j)/d = 2 pi (i + j M)/(d M)
    speed = np.abs(cover.inner.derivative(np.exp(1j * grid(d * M))))
    density = speed.reshape(d, M).sum(axis=0) / d
    if density.min() <= 1e-8 * density.max():
        raise BranchOnBoundary(f"push-forward density vanishes near theta = {grid(M)[np.argmin(density)]:.6f}")
    mean = density.mean()
    k = np.fft.fftfreq(M, 1.0 / M)
    dhat = np.fft.fft(density - mean) / M
    with np.errstate(divide="ignore", invalid="ignore"):
        phat = np.where(k == 0, 0.0, dhat / (1j * k))
    if M % 2 == 0:
        phat[M // 2] = 0.0
    periodic = np.real(np.fft.ifft(phat) * M)
    theta = np.linspace(0.0, 2 * np.pi, M + 1)
    m = mean * theta + np.append(periodic, periodic[0]) - periodic[0]
    L = 2 * np.pi * mean
    m[-1] = L
    return MassParameter(theta, m, density, float(L))


# --- string modes -----------------------------------------------------------

@dataclass(frozen=True)
class StringMode:
    """h_0 = 1, h_{2n-1}(m) = cos(2 pi n m / L), h_{2n}(m) = sin(2 pi n m / L)."""

    k: int
    L: float

    @property
    def n(self) -> int:
        return (self.k + 1) // 2

    @property
    def wavenumber(self) -> float:
        return 2 * np.pi * self.n / self.L

    def __call__(self, m):
        m = np.asarray(m, dtype=float)
        if self.k == 0:
            return np.ones_like(m)
        if self.k % 2:
            return np.cos(self.wavenumber * m)
        return np.sin(self.wavenumber * m)

    def derivative(self, m):
        m = np.asarray(m, dtype=float)
        w = self.wavenumber
        if self.k == 0:
            return np.zeros_like(m)
        if self.k % 2:
            return -w * np.sin(w * m)
        return w * np.cos(w * m)

    def rayleigh(self) -> float:
        return self.wavenumber ** 2


def string_mode(k: int, L: float) -> StringMode:
    if k < 0 or L <= 0:
        raise BadParameters("string mode needs k >= 0 and L > 0")
    return StringMode(int(k), float(L))


def string_rayleigh(h, L: float) -> float:
    """int_0^L h'^2 / int_0^L h^2 for samples of an L-periodic h on a uniform grid of [0, L)."""
    h = np.asarray(h, dtype=float)
    M = len(h)
    k = np.fft.fftfreq(M, 1.0 / M)
    hhat = np.fft.fft(h)
    dh = np.real(np.fft.ifft(hhat * (2j * np.pi * k / L) * (np.abs(k) < M / 2)))
    den = np.sum(h ** 2)
    if den <= 1e-300:
        raise ZeroDenominator("h vanishes on the grid")
    return float(np.sum(dh ** 2) / den)


# --- harmonic extension and conjugate -------------------------------------

def _freqs(M: int) -> np.ndarray:
    return np.fft.fftfreq(M, 1.0 / M)


@dataclass(frozen=True)
class HarmonicPair:
    """u = sum c_n r^|n| e^{i n theta}; v its conjugate (coefficients in FFT order)."""

    u_coeffs: np.ndarray
    v_coeffs: Optional[np.ndarray] = None
    normalization_applied: bool = False

    @property
    def M(self) -> int:
        return len(self.u_coeffs)

    def u_boundary(self) -> np.ndarray:
        return _synth(self.u_coeffs)

    def v_boundary(self) -> np.ndarray:
        return _synth(self.v_coeffs)

    def u_radial(self) -> np.ndarray:
        return _synth(np.abs(_freqs(self.M)) * self.u_coeffs)

    def v_radial(self) -> np.ndarray:
        return _synth(np.abs(_freqs(self.M)) * self.v_coeffs)

    def u_angular(self) -> np.ndarray:
        return _synth(1j * _freqs(self.M) * self.u_coeffs)


def _synth(coeffs: np.ndarray) -> np.ndarray:
    return np.real(np.fft.ifft(coeffs) * len(coeffs))


def dirichlet_energy(coeffs: np.ndarray) -> float:
    """Disk Dirichlet energy of the harmonic extension: 2 pi sum |n| |c_n|^2."""
    n = np.abs(_freqs(len(coeffs)))
    return float(2 * np.pi * np.sum(n * np.abs(coeffs) ** 2))


def harmonic_extension(f) -> HarmonicPair:
    f = np.asarray(f, dtype=float)
    return HarmonicPair(np.fft.fft(f) / len(f))


def harmonic_conjugate(pair: HarmonicPair, mu: MassParameter) -> HarmonicPair:
    """Conjugate via the multiplier -i sign(n), shifted so that int v dmu = 0."""
    if pair.M != mu.M:
        raise ValueError("circle samples and mass parameter use different grids")
    n = _freqs(pair.M)
    v = -1j * np.sign(n) * pair.u_coeffs
    if pair.M % 2 == 0:
        v[pair.M // 2] = 0.0
    shift = -mu.integrate(_synth(v)) / mu.L
    v[0] = shift
    return HarmonicPair(pair.u_coeffs, v, True)


def interior_energy(coeffs: np.ndarray, tol: float = 1e-18) -> float:
    """Dirichlet energy by polar quadrature of |grad w|^2 over the disk.

    Gauss-Legendre in r (exact for the truncated series), trapezoid in theta
    on a zero-padded grid.
    """
    n = _freqs(len(coeffs)).astype(int)
    big = np.abs(coeffs) > tol * max(np.abs(coeffs).max(), 1e-300)
    keep = big & (n != 0)
    if not np.any(keep):
        return 0.0
    n, c = n[keep], coeffs[keep]
    band = int(np.abs(n).max())
    P = 4 * band + 4
    nodes, wts = np.polynomial.legendre.leggauss(band + 2)
    r = 0.5 * (nodes + 1)
    wr = 0.5 * wts
    total = 0.0
    grad_r = np.zeros(P, dtype=complex)
    grad_t = np.zeros(P, dtype=complex)
    for rk, wk in zip(r, wr):
        scale = rk ** (np.abs(n) - 1)
        grad_r[:] = 0
        grad_t[:] = 0
        grad_r[np.mod(n, P)] = np.abs(n) * c * scale
        grad_t[np.mod(n, P)] = 1j * n * c * scale
        gr = np.fft.ifft(grad_r) * P
        gt = np.fft.ifft(grad_t) * P
        integrand = np.abs(gr.real) ** 2 + np.abs(gt.real) ** 2
        total += wk * rk * integrand.sum() * 2 * np.pi / P
    return float(total)


# --- Rayleigh quotients on the cover --------------------------------------

def rayleigh_on_cover(cover: CoverMap, pair: HarmonicPair, mu: MassParameter) -> tuple:
    """(R(alpha), R(beta)) for alpha = u o psi, beta = v o psi on Sigma."""
    if not pair.normalization_applied:
        raise ValueError("harmonic conjugate must be normalized first")
    d = cover.degree
    den_a = mu.integrate(pair.u_boundary() ** 2)
    den_b = mu.integrate(pair.v_boundary() ** 2)
    if den_a <= 1e-300 or den_b <= 1e-300:
        raise ZeroDenominator("test function vanishes on the boundary")
    return (d * dirichlet_energy(pair.u_coeffs) / den_a,
            d * dirichlet_energy(pair.v_coeffs) / den_b)


def circle_test_function(mu: MassParameter, modes, coeffs=None) -> np.ndarray:
    """Samples of f = sum_k c_k h_k(m(theta)) on the periodic grid."""
    modes = list(modes)
    coeffs = np.ones(len(modes)) if coeffs is None else np.asarray(coeffs, dtype=float)
    m = mu.values
    return sum(c * h(m) for c, h in zip(coeffs, modes))


@dataclass(frozen=True)
class IdentityReport:
    degree: int
    mode: int
    residuals: dict
    cauchy_schwarz_slack: float
    rayleigh_alpha: float
    rayleigh_beta: float
    string_bound: float   # d^2 R_L(h)

    @property
    def chain_slack(self) -> float:
        return self.string_bound - self.rayleigh_alpha * self.rayleigh_beta

    def rows(self) -> list:
        out = [(name, value) for name, value in self.residuals.items()]
        out += [("cauchy_schwarz_slack", self.cauchy_schwarz_slack),
                ("rayleigh_alpha", self.rayleigh_alpha),
                ("rayleigh_beta", self.rayleigh_beta),
                ("rayleigh_product", self.rayleigh_alpha * self.rayleigh_beta),
                ("string_bound", self.string_bound),
                ("chain_slack", self.chain_slack)]
        return out


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def verify_identity_chain(cover: CoverMap, h: StringMode, M: int = DEFAULT_M) -> IdentityReport:
    """Evaluate each step of the product-of-Rayleigh-quotients argument numerically.

    Relative residuals:
      energy_uv       disk energy of u (coefficients) vs of v (interior quadrature)
      flux            energy of u vs boundary flux int v dv/dr dtheta
      cauchy_riemann  max |dv/dr + h'(m) m'| / max |h'(m) m'|
      product         (int |grad alpha|^2)(int |grad beta|^2) vs d^2 (int v dv/dr)^2
      cover_energy    energies of alpha, beta from fluxes on Sigma vs d times disk energies
      pushforward     int_{dSigma} alpha^2 ds vs int f^2 dmu (and likewise beta)
    The Cauchy-Schwarz slack is normalized by the product of the two norms.
    """
    mu = mass_parameter(cover, M)
    if abs(h.L - mu.L) > 1e-9 * mu.L:
        h = string_mode(h.k, mu.L)
    d = cover.degree
    f = h(mu.values)
    pair = harmonic_conjugate(harmonic_extension(f), mu)

    e_u = dirichlet_energy(pair.u_coeffs)
    e_v = interior_energy(pair.v_coeffs)
    v = pair.v_boundary()
    v_r = pair.v_radial()
    flux = float(np.sum(v * v_r) * 2 * np.pi / M)

    target = -h.derivative(mu.values) * mu.density
    cr = float(np.abs(v_r - target).max() / max(np.abs(target).max(), 1e-300))

    hp = h.derivative(mu.values)
    a, b, c = mu.integrate(v ** 2), mu.integrate(hp ** 2), mu.integrate(v * hp)
    cs_slack = (a * b - c * c) / max(a * b, 1e-300)

    # boundary of Sigma in the disk parameter phi: alpha(phi) = f(d phi)
    idx = np.mod(d * np.arange(M), M)
    ds = np.abs(cover.inner.derivative(np.exp(1j * grid(M)))) * 2 * np.pi / M
    u_r = pair.u_radial()
    energy_alpha = float(np.sum(f[idx] * d * u_r[idx]) * 2 * np.pi / M)
    energy_beta = float(np.sum(v[idx] * d * v_r[idx]) * 2 * np.pi / M)
    norm_alpha = float(np.sum(f[idx] ** 2 * ds))
    norm_beta = float(np.sum(v[idx] ** 2 * ds))

    residuals = {
        "energy_uv": _rel(e_u, e_v) if e_u > 0 else abs(e_v),
        "flux": _rel(e_u, flux) if e_u > 0 else abs(flux),
        "cauchy_riemann": cr,
        "product": _rel(energy_alpha * energy_beta, d * d * flux * flux),
        "cover_energy": max(_rel(energy_alpha, d * e_u), _rel(energy_beta, d * e_v)),
        "pushforward": max(_rel(norm_alpha, mu.integrate(f ** 2)), _rel(norm_beta, a)),
    }
    ra, rb = rayleigh_on_cover(cover, pair, mu)
    return IdentityReport(d, h.k, residuals, float(cs_slack), ra, rb, d * d * h.rayleigh())


# --- constrained test functions -------------------------------------------

@dataclass(frozen=True)
class TestFunctionResult:
    p: int
    q: int
    coeffs: np.ndarray
    rayleigh_alpha: float
    rayleigh_beta: float
    sigma_p: float
    sigma_q: float
    string_bound: float       # d^2 R_L(h) for the assembled h
    top_mode_bound: float     # d^2 R_L(h_N)
    orthogonality: float = field(default=0.0)

    @property
    def product(self) -> float:
        return self.rayleigh_alpha * self.rayleigh_beta

    @property
    def dominance(self) -> float:
        """R(alpha) R(beta) - sigma_p sigma_q, nonnegative up to discretization."""
        return self.product - self.sigma_p * self.sigma_q


def hps_test_function(cover: CoverMap, spectrum: Spectrum, p: int, q: int,
                      M: int = DEFAULT_M) -> TestFunctionResult:
    """Combine h_1..h_N (N = p + q - 1) so that alpha is orthogonal to phi_1..phi_{p-1}
    and beta to phi_1..phi_{q-1} on the boundary of Sigma.

    ``spectrum`` must come from the Fourier solver on ``cover.inner`` so that its
    eigenvectors can be evaluated in the disk parameter.
    """
    if p < 1 or q < 1:
        raise BadParameters("p, q must be >= 1")
    if spectrum.solver != "fourier" or spectrum.vectors is None:
        raise ValueError("constrained construction needs Fourier-solver eigenvectors")
    if max(p, q) >= len(spectrum.values):
        raise ValueError("spectrum too short for requested (p, q)")
    mu = mass_parameter(cover, M)
    d = cover.degree
    N = p + q - 1
    modes = [string_mode(k, mu.L) for k in range(1, N + 1)]
    pairs = [harmonic_conjugate(harmonic_extension(h(mu.values)), mu) for h in modes]
    F = np.column_stack([pr.u_boundary() for pr in pairs])
    V = np.column_stack([pr.v_boundary() for pr in pairs])

    idx = np.mod(d * np.arange(M), M)
    phi = grid(M)
    ds = np.abs(cover.inner.derivative(np.exp(1j * phi))) * 2 * np.pi / M
    eig = eigenfunction_samples(spectrum, phi)
    rows = [eig[:, j] * ds @ F[idx] for j in range(1, p)]
    rows += [eig[:, j] * ds @ V[idx] for j in range(1, q)]
    if rows:
        C = np.vstack(rows)
        null = la.null_space(C, rcond=1e-10)
        if null.shape[1] == 0:
            null = la.svd(C)[2][-1:].T
        c = null[:, 0]
        ortho = float(np.abs(C @ c).max())
    else:
        c = np.ones(1)
        ortho = 0.0
    c = c / np.linalg.norm(c)

    f = F @ c
    pair = harmonic_conjugate(harmonic_extension(f), mu)
    ra, rb = rayleigh_on_cover(cover, pair, mu)
    h_vals = sum(ck * h(mu.values) for ck, h in zip(c, modes))
    h_der = sum(ck * h.derivative(mu.values) for ck, h in zip(c, modes))
    r_string = mu.integrate(h_der ** 2) / mu.integrate(h_vals ** 2)
    return TestFunctionResult(p, q, c, ra, rb, float(spectrum.values[p]), float(spectrum.values[q]),
                              d * d * r_string, d * d * modes[-1].rayleigh(), ortho)


# --- closed-form bounds -----------------------------------------------------

def _check_topology(gamma, l, L) -> None:
    if gamma < 0 or l < 1 or not L > 0:
        raise BadParameters(f"need genus >= 0, l >= 1, L > 0 (got {gamma}, {l}, {L})")


def hps_bound_single(k: int, gamma: int, l: int, L: float) -> float:
    """Upper bound 2 pi (gamma + l) k / L on sigma_k."""
    if k < 1:
        raise BadParameters("k must be >= 1")
    _check_topology(gamma, l, L)
    return 2 * math.pi * (gamma + l) * k / L


def hps_bound_pair(p: int, q: int, gamma: int, l: int, L: float) -> float:
    """Upper bound on sigma_p sigma_q: pi^2 (gamma+l)^2 (p+q)^2 / L^2 for p+q even,
    with (p+q-1)^2 in place of (p+q)^2 when p+q is odd."""
    if p < 1 or q < 1:
        raise BadParameters("p, q must be >= 1")
    _check_topology(gamma, l, L)
    s = p + q if (p + q) % 2 == 0 else p + q - 1
    return (math.pi * (gamma + l) * s / L) ** 2

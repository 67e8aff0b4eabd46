"""Acceptance criteria, one test per criterion.

Each test records its measured quantity; the terminal summary prints one
PASS/FAIL line per criterion.  Run alone with ``pytest tests/test_acceptance.py``.
"""
import math

import numpy as np
import pytest

from steklov import harness
from steklov.annulus import annulus_mode_eigenvalues, steklov_spectrum_annulus
from steklov.bem import steklov_spectrum_bem
from steklov.fourier import steklov_spectrum_fourier
from steklov.hps import hps_test_function, make_cover, string_mode, string_rayleigh, verify_identity_chain

from _oracles import oracle_roots

CORPUS = [harness.load_domain(name) for name in harness.BUILTIN_NAMES]
TRUSTED_K = 8
PQ = 6


@pytest.fixture(scope="module")
def reports():
    """Bound reports for every (domain, solver) of the built-in corpus."""
    return [harness.verify_domain(d, s, TRUSTED_K, PQ) for d in CORPUS for s in d.solvers]


def test_disk_exactness(criterion):
    expected = np.array([0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5], float)
    disk = harness.load_domain("disk")
    ef = np.abs(steklov_spectrum_fourier(disk.conformal, 64, 10).values - expected).max()
    eb = np.abs(steklov_spectrum_bem(disk.spec, 128, 10).values - expected).max()
    criterion(1, "disk exactness", f"fourier err {ef:.1e} (< 1e-10), bem err {eb:.1e} (< 1e-7)")
    assert ef < 1e-10 and eb < 1e-7


def test_weinstock(criterion):
    disk = harness.load_domain("disk")
    s1L = steklov_spectrum_fourier(disk.conformal, 64, 2).values[1] * disk.spec.L
    rel = abs(s1L - 2 * math.pi) / (2 * math.pi)
    margins = {}
    for d in CORPUS:
        if d.conformal is not None and d.id != "disk":
            margins[d.id] = 2 * math.pi - steklov_spectrum_fourier(d.conformal, 64, 2).values[1] * d.spec.L
    worst = min(margins, key=margins.get)
    criterion(2, "Weinstock equality and strictness",
              f"disk rel err {rel:.1e} (< 1e-9), smallest margin {margins[worst]:.3e} on {worst} (> 1e-4)")
    assert rel < 1e-9
    assert all(m > 1e-4 for m in margins.values())


def test_single_eigenvalue_bound(reports, criterion):
    worst = min((r.k_rows[i][4], r.domain, r.solver, r.k_rows[i][0]) for r in reports for i in range(TRUSTED_K))
    bad = [(r.domain, r.solver, v) for r in reports for v in r.violations if v.startswith("k=")]
    assert {r.l for r in reports} == {1, 2, 3}
    criterion(3, "sigma_k L <= 2 pi l k",
              f"{len(bad)} violations over {len(reports)} runs, min slack {worst[0]:.3e} ({worst[1]}/{worst[2]} k={worst[3]})")
    assert not bad


def test_pair_bound(reports, criterion):
    rows = [(r.pq_rows[i][4], r.domain, r.solver, r.pq_rows[i][:2]) for r in reports for i in range(len(r.pq_rows))]
    bad = [row for row in rows if row[0] < -harness.VIOLATION_TOL]
    worst = min(rows)
    assert len(rows) == len(reports) * PQ * (PQ + 1) // 2
    criterion(4, "sigma_p sigma_q L^2 bound",
              f"{len(bad)} violations over {len(rows)} pairs, min slack {worst[0]:.3e} ({worst[1]}/{worst[2]} p,q={worst[3]})")
    assert not bad


def test_annulus_oracle(criterion):
    bem_err = 0.0
    for eps in (0.2, 0.5, 0.8):
        exact = steklov_spectrum_annulus(eps, TRUSTED_K).values[1:]
        d = harness.annulus_domain("a", eps)
        num = steklov_spectrum_bem(d.spec, 128, TRUSTED_K).values[1:]
        bem_err = max(bem_err, float((np.abs(num - exact) / exact).max()))
    root_err = 0.0
    for eps in (0.2, 0.5, 0.8):
        for n in range(0, 6):
            roots = oracle_roots(eps, n)
            closed = annulus_mode_eigenvalues(eps, n)[1:] if n == 0 else annulus_mode_eigenvalues(eps, n)
            assert len(roots) == len(closed)
            root_err = max(root_err, float((np.abs(np.array(closed) - roots) / np.array(roots)).max()))
    criterion(5, "annulus closed form", f"vs bem {bem_err:.1e} (< 1e-6), vs bracketed roots {root_err:.1e} (< 1e-12)")
    assert bem_err < 1e-6 and root_err < 1e-12


def test_identity_chain(criterion):
    worst_res, worst_cs = 0.0, math.inf
    for d in (1, 2, 3):
        for taylor in ([1], [1, 0.3]):
            cover = make_cover(d, taylor)
            for k in range(1, 7):
                rep = verify_identity_chain(cover, string_mode(k, 1.0), 1024)
                worst_res = max(worst_res, max(rep.residuals.values()))
                worst_cs = min(worst_cs, rep.cauchy_schwarz_slack)
    criterion(6, "identity chain", f"max residual {worst_res:.1e} (< 1e-9), min Cauchy-Schwarz slack {worst_cs:.1e} (>= -1e-10)")
    assert worst_res < 1e-9 and worst_cs >= -1e-10


def test_string_modes(criterion):
    worst = 0.0
    for L in (2 * math.pi, 1.0, 5.0):
        m = L * np.arange(512) / 512
        for k in range(1, 11):
            n = (k + 1) // 2
            exact = (2 * math.pi * n / L) ** 2
            worst = max(worst, abs(string_rayleigh(string_mode(k, L)(m), L) - exact) / exact)
    criterion(7, "string-mode Rayleigh quotients", f"max rel err {worst:.1e} (< 1e-12)")
    assert worst < 1e-12


def test_dominance(criterion):
    worst = (math.inf, None)
    for name, taylor in (("disk", [1]), ("oval z+0.1z^3", [1, 0, 0.1])):
        cover = make_cover(1, taylor)
        spec = steklov_spectrum_fourier(cover.inner, 64, 8)
        for p, q in ((1, 1), (1, 2), (2, 2)):
            res = hps_test_function(cover, spec, p, q, 1024)
            worst = min(worst, (res.dominance, f"{name} p,q={p},{q}"), key=lambda t: t[0])
    criterion(8, "test-function dominance", f"min R(a)R(b) - s_p s_q = {worst[0]:.3e} at {worst[1]} (>= -1e-7)")
    assert worst[0] >= -1e-7


def test_convergence_and_scaling(criterion):
    drift = 0.0
    for d in CORPUS:
        if d.conformal is not None:
            a = steklov_spectrum_fourier(d.conformal, 64, TRUSTED_K).values[1:]
            b = steklov_spectrum_fourier(d.conformal, 128, TRUSTED_K).values[1:]
            drift = max(drift, float((np.abs(a - b) / b).max()))
        a = steklov_spectrum_bem(d.spec, 128, TRUSTED_K).values[1:]
        b = steklov_spectrum_bem(d.spec, 256, TRUSTED_K).values[1:]
        drift = max(drift, float((np.abs(a - b) / b).max()))
    scale = max(harness.scale_invariance(d, solver=s) for d in CORPUS for s in d.solvers)
    criterion(9, "resolution doubling and scale invariance",
              f"max doubling drift {drift:.1e} (< 1e-6), max scaling drift {scale:.1e} (< 1e-8)")
    assert drift < 1e-6 and scale < 1e-8


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))

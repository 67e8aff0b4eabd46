import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from steklov.errors import (
    DegenerateCurve,
    GenusUnsupported,
    HoleOutsideOuter,
    HolesOverlap,
    OrientationMismatch,
    SelfIntersection,
)
from steklov.geometry import (
    BoundaryCurve,
    Spectrum,
    arclength,
    assemble_domain,
    circle,
    curve_from_fourier,
    domain_from_json,
    ellipse,
    winding_number,
)


def adaptive_length(curve):
    val, _ = quad(lambda t: abs(curve.dz(np.array([t]))[0]), 0, 2 * np.pi, epsabs=1e-13, epsrel=1e-13, limit=500)
    return val


def test_unit_circle():
    c = curve_from_fourier([0, 0, 1])
    assert c.signed_area() == pytest.approx(np.pi, abs=1e-14)
    assert arclength(c) == pytest.approx(2 * np.pi, abs=1e-12)


def test_radius_three():
    assert arclength(circle(0, 3.0)) == pytest.approx(6 * np.pi, abs=1e-12)


def test_joukowski_ellipse_against_adaptive_quadrature():
    c = curve_from_fourier([1, 0, 2])
    assert arclength(c) > 2 * np.pi
    assert arclength(c) == pytest.approx(adaptive_length(c), rel=1e-10)


def test_ellipse_semi_axes_two_one():
    c = ellipse(2.0, 1.0)
    x = c.z(np.array([0.0, np.pi / 2]))
    assert np.allclose(x, [2, 1j])
    assert arclength(c) == pytest.approx(adaptive_length(c), abs=1e-10)


def test_looped_curve_rejected():
    with pytest.raises((DegenerateCurve, SelfIntersection)):
        curve_from_fourier([1, 0.8], offset=1)


def test_cusp_rejected():
    # z' = i e^{it} (1 + e^{it}) vanishes at t = pi
    with pytest.raises(DegenerateCurve):
        curve_from_fourier([1, 0.5], offset=1)


def test_orientation_checked():
    with pytest.raises(OrientationMismatch):
        curve_from_fourier([0, 0, 1], "negative")
    assert circle(0, 0.5, "negative").signed_area() < 0


def test_constant_or_empty_rejected():
    with pytest.raises(DegenerateCurve):
        curve_from_fourier([0, 0, 0])
    with pytest.raises(DegenerateCurve):
        curve_from_fourier([3.0], offset=0)


def test_assemble_disk():
    d = assemble_domain(circle())
    assert d.l == 1 and d.L == pytest.approx(2 * np.pi, abs=1e-12)


def test_assemble_annulus_length():
    d = assemble_domain(circle(), [circle(0, 0.5, "negative")])
    assert d.l == 2
    assert d.L == pytest.approx(3 * np.pi, abs=1e-12)


def test_hole_outside():
    with pytest.raises(HoleOutsideOuter):
        assemble_domain(circle(), [circle(0, 2.0, "negative")])
    with pytest.raises(HoleOutsideOuter):
        assemble_domain(circle(), [circle(0.9, 0.2, "negative")])


def test_overlapping_holes():
    with pytest.raises(HolesOverlap):
        assemble_domain(circle(), [circle(-0.1, 0.3, "negative"), circle(0.1, 0.3, "negative")])


def test_hole_orientation_required():
    with pytest.raises(OrientationMismatch):
        assemble_domain(circle(), [circle(0, 0.5)])


def test_genus_recorded_but_not_solvable():
    d = assemble_domain(circle(), genus=1)
    with pytest.raises(GenusUnsupported):
        d.require_planar()


def test_winding_number():
    assert list(winding_number(circle(), [0, 0.5j, 2])) == [1, 1, 0]
    assert list(winding_number(circle(0, 1, "negative"), [0])) == [-1]


def test_json_roundtrip():
    d = assemble_domain(ellipse(1.5, 1.0), [circle(0.2, 0.3, "negative")])
    text = json.dumps(d.to_json())
    e = domain_from_json(text)
    assert e.l == 2 and e.L == pytest.approx(d.L, rel=1e-14)
    assert json.loads(text)["curves"][1]["orientation"] == "-"


def test_length_is_sum_of_components():
    d = assemble_domain(ellipse(1.5, 1.0), [circle(0.2, 0.3, "negative"), circle(-0.8, 0.1, "negative")])
    total = sum(adaptive_length(c) for c in d.curves)
    assert d.L == pytest.approx(total, rel=1e-10)


small = st.floats(-0.04, 0.04)


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=12, max_size=12), st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi),
       st.floats(0.1, 10))
def test_arclength_invariances(parts, tau, phi, c):
    coeffs = np.array(parts[:6]) + 1j * np.array(parts[6:])
    coeffs = np.insert(coeffs, 4, 1.0)  # c_1 = 1 among n = -3..3
    curve = BoundaryCurve(coeffs, -3)
    base = arclength(curve)
    n = curve.frequencies
    shifted = BoundaryCurve(coeffs * np.exp(1j * n * tau), -3)
    rotated = BoundaryCurve(coeffs * np.exp(1j * phi), -3)
    assert arclength(shifted) == pytest.approx(base, rel=1e-12)
    assert arclength(rotated) == pytest.approx(base, rel=1e-12)
    assert arclength(curve.scaled(c)) == pytest.approx(c * base, rel=1e-12)


def test_spectrum_invariants():
    s = Spectrum(np.array([0.0, 1.0, 1.0]), "fourier", 8, 2)
    assert list(s.trusted) == [0, 1, 1]
    with pytest.raises(ValueError):
        Spectrum(np.array([0.1, 1.0]), "bem", 64, 1)
    with pytest.raises(ValueError):
        Spectrum(np.array([0.0, 2.0, 1.0]), "bem", 64, 1)
    with pytest.raises(ValueError):
        Spectrum(np.array([0.0, 1.0]), "bem", 64, 5)

"""Steklov spectra of planar domains and checks of isoperimetric eigenvalue bounds."""
from .annulus import annulus_mode_eigenvalues, steklov_spectrum_annulus
from .bem import build_layer_system, dtn_bem, steklov_spectrum_bem
from .conformal import ConformalMap, boundary_weight, validate_univalence
from .fourier import convergence_report, dtn_matrix, steklov_spectrum_fourier
from .geometry import (
    BoundaryCurve,
    DomainSpec,
    Spectrum,
    arclength,
    assemble_domain,
    circle,
    curve_from_fourier,
    ellipse,
)
from .hps import (
    CoverMap,
    hps_bound_pair,
    hps_bound_single,
    hps_test_function,
    mass_parameter,
    string_mode,
    string_rayleigh,
    verify_identity_chain,
)
from .numerics import bracketed_root, generalized_symmetric_eig

__version__ = "0.1.0"

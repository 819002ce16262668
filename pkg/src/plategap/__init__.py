"""Numerical checks of spectral gaps and Rellich-type inequalities on model spaces."""

from .eigensolve import RadialEigenProblem, SpectralResult, dense_eigenvalues, gap_convergence_study, solve
from .errors import (BracketError, DegenerateProfileError, EigenSolveError, HypothesisError,
                     PlateGapError, QuadratureError, SmoothnessError)
from .estimators import RadialEigenSolver, SharpnessSweep
from .modelspace import ModelSpace, RadialProfile, ct_kappa, radial_laplacian, radial_laplacian_iter
from .quadrature import integrate_radial, lp_functional, power_integral, rayleigh_quotient
from .rellich import rellich_quotient_check, rellich_sweep
from .report import SweepReport, SweepRow
from .riccati import RiccatiSystem, catalog, numeric_maximize, verify_system
from .sharpness import make_u_delta, sharp_constant, sharpness_sweep, truncation_phi
from .specialfn import bessel_i, bessel_j, cross_product_zero, first_zero_j

__version__ = "0.1.0"

__all__ = [
    "BracketError", "DegenerateProfileError", "EigenSolveError", "HypothesisError",
    "ModelSpace", "PlateGapError", "QuadratureError", "RadialEigenProblem",
    "RadialEigenSolver", "RadialProfile", "RiccatiSystem", "SharpnessSweep",
    "SmoothnessError", "SpectralResult", "SweepReport", "SweepRow",
    "bessel_i", "bessel_j", "catalog", "cross_product_zero", "ct_kappa",
    "dense_eigenvalues", "first_zero_j", "gap_convergence_study", "integrate_radial",
    "lp_functional", "make_u_delta", "numeric_maximize", "power_integral",
    "radial_laplacian", "radial_laplacian_iter", "rayleigh_quotient",
    "rellich_quotient_check", "rellich_sweep", "sharp_constant", "sharpness_sweep",
    "solve", "truncation_phi", "verify_system",
]

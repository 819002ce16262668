"""scikit-learn style wrappers around the solvers.

``X`` is a single column of scalar sizes: ball radii for
:class:`RadialEigenSolver`, truncation lengths for :class:`SharpnessSweep`.
``fit`` runs the computation and keeps the report, ``transform`` returns the
computed quantities for the same sizes.  There is no training target.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .eigensolve import RadialEigenProblem, gap_limit, solve
from .modelspace import ModelSpace
from .report import SweepReport
from .sharpness import sharpness_sweep


def _sizes(X, name):
    X = check_array(X, ensure_2d=False, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"{name} must be a single column, got shape {X.shape}")
        X = X[:, 0]
    if np.any(~(X > 0)):
        raise ValueError(f"{name} must be positive")
    return X


class RadialEigenSolver(TransformerMixin, BaseEstimator):
    """Lowest radial eigenvalues on balls of the radii given in ``X``."""

    def __init__(self, kind="membrane", n=2, kappa=0.0, mesh=256, m=1, quad_order=8):
        self.kind = kind
        self.n = n
        self.kappa = kappa
        self.mesh = mesh
        self.m = m
        self.quad_order = quad_order

    def fit(self, X, y=None):
        radii = _sizes(X, "radii")
        space = ModelSpace(self.n, self.kappa)
        self.results_ = {}
        for R in radii:
            prob = RadialEigenProblem(self.kind, space, float(R), self.mesh, self.quad_order)
            self.results_[float(R)] = solve(prob, self.m, extrapolate=False)
        self.limit_ = gap_limit(self.kind, space)
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "results_")
        radii = _sizes(X, "radii")
        missing = [r for r in radii if float(r) not in self.results_]
        if missing:
            raise ValueError(f"radii {missing} were not fitted")
        return np.array([self.results_[float(r)].eigenvalues for r in radii])


class SharpnessSweep(TransformerMixin, BaseEstimator):
    """Rayleigh quotients of the truncated exponentials for the lengths in ``X``."""

    def __init__(self, kind="clamped", n=2, kappa=1.0, p=2.0, k=1, gradient=False):
        self.kind = kind
        self.n = n
        self.kappa = kappa
        self.p = p
        self.k = k
        self.gradient = gradient

    def fit(self, X, y=None):
        deltas = np.sort(_sizes(X, "deltas"))
        self.report_: SweepReport = sharpness_sweep(self.kind, self.n, self.kappa, self.p,
                                                    deltas, self.k, self.gradient)
        self.quotients_ = {float(r.parameter): r.computed for r in self.report_.rows}
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "report_")
        deltas = _sizes(X, "deltas")
        missing = [d for d in deltas if float(d) not in self.quotients_]
        if missing:
            raise ValueError(f"deltas {missing} were not fitted")
        return np.array([[self.quotients_[float(d)]] for d in deltas])

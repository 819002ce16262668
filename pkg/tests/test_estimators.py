from __future__ import annotations

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from plategap.estimators import RadialEigenSolver, SharpnessSweep


def test_eigen_solver_fit_transform():
    est = RadialEigenSolver(kind="membrane", n=2, kappa=0.0, mesh=128, m=2)
    X = np.array([[1.0], [2.0]])
    out = est.fit_transform(X)
    assert out.shape == (2, 2)
    assert out[0, 0] == pytest.approx(4 * out[1, 0], rel=1e-6)
    assert est.limit_ == 0.0
    assert est.n_features_in_ == 1


def test_eigen_solver_accepts_1d_and_rejects_unknown_radius():
    est = RadialEigenSolver(kind="clamped", n=2, kappa=1.0, mesh=128).fit([2.0, 5.0])
    assert est.transform([5.0]).shape == (1, 1)
    assert est.limit_ == 1 / 16
    with pytest.raises(ValueError):
        est.transform([3.0])


def test_not_fitted():
    with pytest.raises(NotFittedError):
        RadialEigenSolver().transform([[1.0]])
    with pytest.raises(NotFittedError):
        SharpnessSweep().transform([[8.0]])


def test_invalid_inputs():
    with pytest.raises(ValueError):
        RadialEigenSolver().fit([[1.0, 2.0]])
    with pytest.raises(ValueError):
        RadialEigenSolver().fit([[-1.0]])


def test_sharpness_estimator():
    est = SharpnessSweep(kind="clamped", n=2, kappa=1.0, p=2.0)
    out = est.fit_transform([[64.0], [8.0], [16.0]])
    assert out.shape == (3, 1)
    assert out[0, 0] == pytest.approx(1 / 16, rel=1e-12)
    assert est.report_.theorem == "T1.1"
    assert [r.parameter for r in est.report_.rows] == [8.0, 16.0, 64.0]


def test_params_and_clone():
    est = SharpnessSweep(kind="higher_order_clamped", k=2, gradient=True)
    params = est.get_params()
    assert params["k"] == 2 and params["gradient"] is True
    twin = clone(est)
    assert twin.get_params() == params
    est.set_params(n=5)
    assert est.n == 5

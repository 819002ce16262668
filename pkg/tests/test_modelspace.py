from __future__ import annotations

import math

import numpy as np
import pytest
import sympy as sp

from plategap.modelspace import (ModelSpace, RadialProfile, ct_kappa, laplace_comparison_check,
                                 log_volume_weight, radial_laplacian, radial_laplacian_iter,
                                 volume_weight)


def test_ct_kappa_values():
    assert ct_kappa(2.0, 0.0) == 0.5
    assert ct_kappa(1.0, 1.0) == pytest.approx((math.e**2 + 1) / (math.e**2 - 1), rel=1e-15)
    assert abs(ct_kappa(1e6, 1.0) - 1.0) < 1e-12


def test_ct_kappa_above_kappa():
    t = np.geomspace(1e-3, 30, 200)
    for kappa in (0.3, 1.0, 4.0):
        # strict only where coth(kappa t) - 1 is representable
        assert np.all(ct_kappa(t, kappa) >= kappa)
        assert np.all(ct_kappa(t[kappa * t < 15], kappa) > kappa)


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_ct_kappa_rejects_nonpositive_radius(bad):
    with pytest.raises(ValueError):
        ct_kappa(bad, 1.0)


def test_volume_weight_values():
    assert volume_weight(3.0, ModelSpace(2, 0.0)) == pytest.approx(3.0)
    assert volume_weight(1.0, ModelSpace(2, 1.0)) == pytest.approx(math.sinh(1.0), rel=1e-15)
    t = np.array([1e-6, 1e-5, 1e-4])
    np.testing.assert_allclose(volume_weight(t, ModelSpace(3, 2.0)) / t**2, 1.0, rtol=1e-7)


def test_log_volume_weight_is_finite_far_out():
    space = ModelSpace(5, 1.0)
    t = np.array([800.0, 2000.0])
    lw = log_volume_weight(t, space)
    np.testing.assert_allclose(lw, 4 * (t - math.log(2.0)), rtol=1e-14)


def test_modelspace_validation():
    with pytest.raises(ValueError):
        ModelSpace(1, 0.0)
    with pytest.raises(ValueError):
        ModelSpace(3, -1.0)


def test_laplacian_of_square_is_2n():
    u = RadialProfile.polynomial([0, 0, 1], (0.0, 2.0))
    assert radial_laplacian(u, 1.0, ModelSpace(3, 0.0)) == pytest.approx(6.0, rel=1e-14)


def test_laplacian_of_exponential():
    s, t = 0.5, 5.0
    u = RadialProfile.exponential(s)
    expected = s * (s - 2 * s / math.tanh(t)) * math.exp(-s * t)
    assert radial_laplacian(u, t, ModelSpace(2, 1.0)) == pytest.approx(expected, rel=1e-13)


def test_constants_are_harmonic():
    u = RadialProfile.constant(3.0)
    t = np.linspace(0.1, 10, 20)
    for space in (ModelSpace(2, 0.0), ModelSpace(4, 1.5)):
        assert np.all(radial_laplacian(u, t, space) == 0.0)


@pytest.mark.parametrize("n,kappa,p", [(2, 1.0, 2.0), (3, 1.0, 3.0), (5, 0.5, 2.5)])
def test_iterated_laplacian_of_exponential_asymptotics(n, kappa, p):
    s = (n - 1) * kappa / p
    u = RadialProfile.exponential(s)
    space = ModelSpace(n, kappa)
    t = np.array([40.0, 60.0])
    one = radial_laplacian_iter(u, 1, space)
    np.testing.assert_allclose(one.value(t), radial_laplacian(u, t, space), rtol=1e-14)
    for k in (2, 3):
        lk = radial_laplacian_iter(u, k, space).value(t)
        np.testing.assert_allclose(lk / (s ** (2 * k) * (1 - p) ** k * np.exp(-s * t)), 1.0, rtol=1e-10)


@pytest.mark.parametrize("n,kappa", [(3, 1.0), (5, 0.7), (2, 2.0)])
def test_iterated_laplacian_matches_symbolic(n, kappa):
    t = sp.symbols("t", positive=True)
    expr = (1 - t**2 / 9) ** 5 * (1 + t**2 / 4)

    def lap(f):
        return sp.diff(f, t, 2) + (n - 1) * kappa * sp.coth(kappa * t) * sp.diff(f, t)

    targets = [lap(expr)]
    targets.append(lap(targets[0]))
    u = RadialProfile.bump(5, (1.0, 9 / 4), 3.0)
    space = ModelSpace(n, kappa)
    pts = [0.4, 1.1, 2.5]
    for k, target in enumerate(targets, 1):
        got = radial_laplacian_iter(u, k, space).value(np.array(pts))
        want = [float(target.subs(t, x).evalf(30)) for x in pts]
        np.testing.assert_allclose(got, want, rtol=1e-10)


@pytest.mark.parametrize("n", [2, 3])
def test_laplacian_matches_cartesian_finite_differences(n):
    u = RadialProfile.bump(4, (1.0, 0.5), 2.0)
    space = ModelSpace(n, 0.0)
    h = 1e-3
    rng = np.random.default_rng(n)
    for _ in range(5):
        x = rng.uniform(-1.0, 1.0, n)
        f = lambda y: u.value(np.linalg.norm(y))  # noqa: E731
        fd = sum((f(x + h * e) - 2 * f(x) + f(x - h * e)) / h**2 for e in np.eye(n))
        exact = radial_laplacian(u, np.linalg.norm(x), space)
        assert fd == pytest.approx(exact, rel=1e-6)


def test_laplace_comparison_report():
    rep = laplace_comparison_check(ModelSpace(4, 1.0), [0.5, 2.0, 10.0])
    assert rep.theorem == "T2.1"
    assert rep.passed
    assert rep.rows[1].computed == pytest.approx(3 / math.tanh(2.0))
    rep = laplace_comparison_check(ModelSpace(2, 3.0), [100.0])
    assert abs(rep.rows[0].computed - 3.0) < 1e-12
    rep = laplace_comparison_check(ModelSpace(3, 0.0), [0.1, 5.0])
    assert all(r.computed >= 0 for r in rep.rows)


def test_polynomial_profile_derivatives():
    u = RadialProfile.polynomial([1.0, 2.0, 3.0], (0.0, 1.0))
    assert u.value(0.5) == pytest.approx(1 + 1 + 0.75)
    assert u.d1(0.5) == pytest.approx(2 + 3.0)
    assert u.d2(0.5) == pytest.approx(6.0)
    assert u.value(1.5) == 0.0


@pytest.mark.parametrize("kappa", [1e-300, 2.2250738585e-313, 1e-40, 1e-8])
def test_tiny_curvature_approaches_euclidean(kappa):
    t = np.array([0.3, 1.0, 2.5])
    np.testing.assert_allclose(ct_kappa(t, kappa), 1 / t, rtol=1e-14)
    u = RadialProfile.bump(5, (1.0, 0.5), 3.0)
    flat, tiny = ModelSpace(4, 0.0), ModelSpace(4, kappa)
    for k in (1, 2, 3):
        np.testing.assert_allclose(radial_laplacian_iter(u, k, tiny).value(t),
                                   radial_laplacian_iter(u, k, flat).value(t), rtol=1e-12)
    np.testing.assert_allclose(log_volume_weight(t, tiny), log_volume_weight(t, flat), rtol=1e-14, atol=1e-15)
    np.testing.assert_allclose(volume_weight(t, tiny), volume_weight(t, flat), rtol=1e-14)


def test_small_and_large_branches_of_comparison_agree():
    # the series for coth(y) - 1/y and the closed form meet at y = 0.5
    y = np.array([0.5 - 1e-9, 0.5 + 1e-9])
    t = y / 1.0
    vals = ct_kappa(t, 1.0)
    np.testing.assert_allclose(vals, 1 / np.tanh(t), rtol=1e-14)
    from plategap.modelspace import comparison_jet
    jet = comparison_jet(t, 6, ModelSpace(2, 1.0))
    np.testing.assert_allclose(jet[:, 0], jet[:, 1], rtol=1e-7)

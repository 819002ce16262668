from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.integrate import quad

from plategap.errors import QuadratureError
from plategap.modelspace import ModelSpace, RadialProfile, radial_laplacian
from plategap.quadrature import (adaptive_integrate, green_identity_residual, integrate_radial,
                                 lp_functional, power_integral, rayleigh_quotient)
from plategap.sharpness import bound_E1, make_u_delta


def test_integrate_constant_flat():
    assert integrate_radial(lambda t: np.ones_like(t), (0, 1), ModelSpace(2, 0.0)) == pytest.approx(0.5, rel=1e-14)


def test_integrate_constant_hyperbolic():
    got = integrate_radial(lambda t: np.ones_like(t), (0, 1), ModelSpace(2, 1.0))
    assert got == pytest.approx(math.cosh(1.0) - 1.0, rel=1e-12)


def test_integrate_to_infinity():
    got = integrate_radial(lambda t: np.exp(-2 * t), (0, math.inf), ModelSpace(2, 1.0))
    assert got == pytest.approx(1 / 3, rel=1e-10)


def test_tail_that_does_not_decay_raises():
    with pytest.raises(QuadratureError):
        integrate_radial(lambda t: np.ones_like(t), (0, math.inf), ModelSpace(2, 1.0))


def test_gradient_of_hat():
    u = RadialProfile.polynomial([1.0, -1.0], (0.0, 1.0))
    assert lp_functional(u, 2.0, "gradient", ModelSpace(2, 0.0)) == pytest.approx(0.5, rel=1e-12)


def test_u_delta_mass_exceeds_lower_bound():
    u = make_u_delta(40.0, ModelSpace(2, 1.0), 2.0)
    assert u.decay == 0.5
    got = lp_functional(u, 2.0, "value", ModelSpace(2, 1.0))
    assert got >= 18 * (0.5 - math.exp(-42) / 2)
    assert got >= bound_E1(40.0, 2, 1.0, 2.0)


def test_breakpoints_match_manual_splitting():
    space = ModelSpace(2, 1.0)
    u = make_u_delta(20.0, space, 1.0)
    whole = power_integral(u, 0, 2.0, space)
    pieces = 0.0
    edges = (10.0, 11.0, 19.0, 20.0)
    for a, b in zip(edges[:-1], edges[1:]):
        pieces += power_integral(u, 0, 2.0, space, interval=(a, b))
    assert whole == pytest.approx(pieces, rel=1e-10)


def test_membrane_quotient_polynomial():
    u = RadialProfile.polynomial([1.0, 0.0, -1.0], (0.0, 1.0))
    assert rayleigh_quotient(u, 2.0, "membrane", ModelSpace(3, 0.0)) == pytest.approx(10.5, rel=1e-12)


def test_buckling_quotient_needs_p2():
    u = RadialProfile.bump(3)
    with pytest.raises(ValueError):
        rayleigh_quotient(u, 3.0, "buckling", ModelSpace(3, 0.0))


@pytest.mark.parametrize("n,kappa", [(3, 0.0), (2, 1.0)])
def test_green_identity(n, kappa):
    u = RadialProfile.polynomial([1.0, 0, -2, 0, 1], (0.0, 1.0))
    v = RadialProfile.polynomial([1.0, 0, -3, 0, 3, 0, -1], (0.0, 1.0))
    assert green_identity_residual(u, v, ModelSpace(n, kappa)) < 1e-9


def test_green_identity_disjoint_supports():
    u = RadialProfile.bump(3, radius=1.0)
    x = np.polynomial.Polynomial([0.0, 1.0])
    v = RadialProfile.polynomial(np.polynomial.Polynomial(((x * (1 - x)) ** 3).coef, domain=[2, 3],
                                                          window=[0, 1]), (2.0, 3.0))
    assert green_identity_residual(u, v, ModelSpace(3, 0.0)) == 0.0


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_laplacian_power_integral_against_scipy(p):
    space = ModelSpace(4, 0.8)
    u = RadialProfile.bump(4, (1.0, 0.5), 2.0)
    from plategap.modelspace import radial_laplacian_iter, volume_weight
    lap = radial_laplacian_iter(u, 1, space)
    got = power_integral(lap, 0, p, space)
    f = lambda t: abs(radial_laplacian(u, t, space)) ** p * volume_weight(t, space)  # noqa: E731
    want = quad(f, 0, 2.0, epsabs=0, epsrel=1e-12, limit=400)[0]
    assert got == pytest.approx(want, rel=1e-9)


def test_adaptive_integrate_oscillatory():
    val, err = adaptive_integrate(lambda t: np.sin(50 * t) ** 2, 0.0, math.pi)
    assert val == pytest.approx(math.pi / 2, rel=1e-12)
    assert err >= 0


def test_adaptive_integrate_requires_finite_interval():
    with pytest.raises(ValueError):
        adaptive_integrate(np.exp, 0.0, math.inf)

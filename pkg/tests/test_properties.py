from __future__ import annotations

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from plategap import riccati
from plategap.modelspace import ModelSpace, RadialProfile, ct_kappa, radial_laplacian, volume_weight
from plategap.quadrature import power_integral
from plategap.sharpness import bound_E1, make_u_delta, truncation_phi
from plategap.specialfn import bessel_j

dims = st.integers(2, 8)
curv = st.floats(0.1, 3.0)
powers = st.floats(1.2, 4.0)


@given(t=st.floats(1e-3, 15.0), kappa=curv)
def test_ct_kappa_exceeds_kappa(t, kappa):
    if kappa * t < 15:
        assert ct_kappa(t, kappa) > kappa


@given(t=st.floats(1e-3, 50.0), n=dims, kappa=st.floats(0.0, 3.0))
def test_volume_weight_positive(t, n, kappa):
    assert volume_weight(t, ModelSpace(n, kappa)) > 0


@given(t=st.floats(-10, 200), delta=st.floats(8, 150))
def test_phi_bounded(t, delta):
    assert 0.0 <= truncation_phi(t, delta) <= 1.0


@given(mu=st.floats(0.0, 15.0), x=st.floats(0.5, 50.0))
def test_bessel_j_matches_scipy(mu, x):
    assert abs(bessel_j(mu, x) - special.jv(mu, x)) < 1e-11


@settings(max_examples=50)
@given(n=dims, kappa=curv, p=powers, da=st.floats(0.3, 3.0), db=st.floats(0.3, 3.0))
def test_clamped_maximizer_dominates(n, kappa, p, da, db):
    m = riccati.maximize_clamped_f(n, kappa, p)
    assert riccati.clamped_f(m.a * da, m.b * db, n, kappa, p) <= m.value * (1 + 1e-12)


@settings(max_examples=50)
@given(n=dims, kappa=curv, db=st.floats(0.3, 3.0), dc=st.floats(0.3, 3.0))
def test_buckling_maximizer_dominates(n, kappa, db, dc):
    m = riccati.maximize_buckling_f(n, kappa)
    assert riccati.buckling_f(m.b * db, m.C * dc, n, kappa) <= m.gap * (1 + 1e-12)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(2, 5), p=st.floats(1.5, 3.0), delta=st.floats(8, 80))
def test_E1_below_mass(n, p, delta):
    space = ModelSpace(n, 1.0)
    assert bound_E1(delta, n, 1.0, p) <= power_integral(make_u_delta(delta, space, p), 0, p, space)


@settings(max_examples=30, deadline=None)
@given(c=st.lists(st.floats(-2, 2), min_size=3, max_size=6), n=dims, kappa=st.floats(0.0, 2.0),
       t=st.floats(0.2, 1.8))
def test_laplacian_is_linear(c, n, kappa, t):
    space = ModelSpace(n, kappa)
    u = RadialProfile.polynomial(c, (0.0, 2.0))
    v = RadialProfile.polynomial([1.0, 0.0, -0.25], (0.0, 2.0))
    w = RadialProfile.polynomial(np.polynomial.polynomial.polyadd(np.array(c) * 2.0, [1.0, 0.0, -0.25]), (0.0, 2.0))
    lhs = radial_laplacian(w, t, space)
    rhs = 2 * radial_laplacian(u, t, space) + radial_laplacian(v, t, space)
    assert math.isclose(lhs, rhs, rel_tol=1e-10, abs_tol=1e-10)

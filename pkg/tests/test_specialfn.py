from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from scipy import special
from scipy.optimize import brentq

from plategap.specialfn import (bessel_i, bessel_i_prime, bessel_j, bessel_j_prime, cross_product,
                                cross_product_zero, first_zero_j)


def test_small_argument_values():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0
    assert bessel_i(0, 0.0) == 1.0
    assert bessel_i(1, 0.0) == 0.0
    assert abs(bessel_j(0, 2.404825557695773)) < 1e-9


def test_i0_at_one_against_independent_series():
    series = sum(0.25**k / math.factorial(k) ** 2 for k in range(20))
    assert bessel_i(0, 1.0) == pytest.approx(series, rel=1e-15)
    assert bessel_i(0, 1.0) == pytest.approx(1.2660658777520084, rel=1e-15)


@pytest.mark.parametrize("mu", [0, 0.5, 1, 1.5, 2, 3.5, 7, 8, 12.3, 20])
def test_bessel_j_against_scipy(mu):
    x = np.linspace(0.0, 60.0, 3001)
    np.testing.assert_allclose(bessel_j(mu, x), special.jv(mu, x), rtol=0, atol=5e-12)


@pytest.mark.parametrize("mu", [0, 0.5, 1, 2.5, 6])
def test_bessel_i_against_scipy(mu):
    x = np.linspace(0.01, 25.0, 500)
    np.testing.assert_allclose(bessel_i(mu, x), special.iv(mu, x), rtol=1e-13)


def test_derivatives_against_mpmath():
    for mu in (0.0, 1.5, 3.0):
        for x in (0.7, 5.0, 14.0):
            assert bessel_j_prime(mu, x) == pytest.approx(float(mpmath.besselj(mu, x, derivative=1)), abs=1e-11)
            assert bessel_i_prime(mu, x) == pytest.approx(float(mpmath.besseli(mu, x, derivative=1)), rel=1e-11)


def test_half_order_closed_form():
    x = np.linspace(0.1, 30, 200)
    np.testing.assert_allclose(bessel_j(0.5, x), np.sqrt(2 / (np.pi * x)) * np.sin(x), atol=1e-12)


@pytest.mark.parametrize("mu", [1.0, 2.5, 4.0, 9.0])
def test_recurrences(mu):
    x = np.linspace(0.5, 40.0, 300)
    lhs = bessel_j(mu - 1, x) + bessel_j(mu + 1, x)
    np.testing.assert_allclose(lhs, 2 * mu / x * bessel_j(mu, x), atol=1e-10)
    xi = x[x <= 15]
    lhs = bessel_i(mu - 1, xi) - bessel_i(mu + 1, xi)
    np.testing.assert_allclose(lhs, 2 * mu / xi * bessel_i(mu, xi), rtol=1e-10)


def test_first_zeros():
    assert first_zero_j(0) == pytest.approx(2.404825557695773, rel=1e-13)
    assert first_zero_j(0.5) == pytest.approx(math.pi, rel=1e-13)
    assert first_zero_j(1) == pytest.approx(3.8317059702075125, rel=1e-13)
    for mu in (2, 5, 11):
        assert first_zero_j(mu) == pytest.approx(special.jn_zeros(mu, 1)[0], rel=1e-12)


def test_cross_product_zero_values():
    h0 = cross_product_zero(0)
    assert h0 == pytest.approx(3.196220616582, rel=1e-11)
    # the clamped disk condition J_0 I_1 + I_0 J_1 = 0, written independently with scipy
    oracle = brentq(lambda x: special.jv(0, x) * special.iv(1, x) + special.iv(0, x) * special.jv(1, x),
                    3.0, 3.5, xtol=1e-15)
    assert h0 == pytest.approx(oracle, rel=1e-12)
    # half order: tan x = tanh x in (pi, 3 pi / 2)
    half = brentq(lambda x: math.tan(x) - math.tanh(x), math.pi + 0.1, 1.5 * math.pi - 1e-3, xtol=1e-15)
    assert cross_product_zero(0.5) == pytest.approx(half, rel=1e-12)
    assert half == pytest.approx(3.9266023, rel=1e-7)


@pytest.mark.parametrize("mu", [0.0, 0.5, 1.0, 2.5])
def test_cross_product_positive_before_its_zero(mu):
    h = cross_product_zero(mu)
    x = np.linspace(1e-3, h * (1 - 1e-6), 500)
    assert np.all(cross_product(mu, x) > 0)


def test_negative_argument_rejected():
    with pytest.raises(ValueError):
        bessel_j(0, -1.0)

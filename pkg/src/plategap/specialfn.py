"""Bessel functions of the first kind and their first positive zeros.

``J_mu`` uses the ascending series up to ``x = max(12, mu)``; beyond that the
Hankel asymptotic expansion gives the two lowest orders with the same
fractional part and upward recurrence reaches ``mu``.  ``I_mu`` is summed
from its (all-positive) ascending series.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BracketError

_SERIES_CUTOFF = 12.0
_MAX_TERMS = 200


def _check_order(mu):
    mu = float(mu)
    if not (mu >= 0 and math.isfinite(mu)):
        raise ValueError(f"Bessel order must be finite and >= 0, got {mu!r}")
    return mu


def _ascending(mu, x, sign):
    # sum_k sign^k (x/2)^(2k+mu) / (k! Gamma(k+mu+1))
    half = 0.5 * x
    term = half**mu / math.gamma(mu + 1.0)
    total = term.copy()
    q = sign * half * half
    for k in range(1, _MAX_TERMS):
        term = term * q / (k * (k + mu))
        total = total + term
        if np.all(np.abs(term) <= 1e-16 * np.maximum(np.abs(total), 1e-300)) and k > half.max():
            break
    return total


def _hankel(mu, x):
    """Large-argument expansion of ``J_mu``."""
    m4 = 4.0 * mu * mu
    p = np.ones_like(x)
    q = np.zeros_like(x)
    a = np.ones_like(x)
    prev = np.full_like(x, np.inf)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 80):
        a = a * (m4 - (2 * k - 1) ** 2) / (k * 8.0 * x)
        # stop each point once its terms start growing: the series is asymptotic
        active &= np.abs(a) < prev
        if not active.any():
            break
        prev = np.where(active, np.abs(a), prev)
        sgn = (-1) ** (k // 2)
        term = np.where(active, sgn * a, 0.0)
        if k % 2:
            q = q + term
        else:
            p = p + term
    chi = x - (0.5 * mu + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def _large_argument(mu, x):
    # Hankel for the fractional order and the next one, then upward recurrence,
    # which is stable while the order stays below x
    nu = mu - math.floor(mu)
    prev, cur = _hankel(nu, x), _hankel(nu + 1, x)
    if mu == nu:
        return prev
    for k in range(1, int(math.floor(mu))):
        prev, cur = cur, 2 * (nu + k) / x * cur - prev
    return cur


def bessel_j(mu, x):
    """Bessel function of the first kind ``J_mu(x)`` for ``x >= 0``."""
    mu = _check_order(mu)
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa < 0):
        raise ValueError("x must be >= 0")
    out = np.empty_like(xa)
    small = xa <= max(_SERIES_CUTOFF, mu)
    if small.any():
        out[small] = _ascending(mu, xa[small], -1.0)
    if (~small).any():
        out[~small] = _large_argument(mu, xa[~small])
    return out if np.ndim(x) else float(out[0])


def bessel_i(mu, x):
    """Modified Bessel function ``I_mu(x)`` for ``x >= 0``."""
    mu = _check_order(mu)
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa < 0):
        raise ValueError("x must be >= 0")
    out = _ascending(mu, xa, 1.0)
    return out if np.ndim(x) else float(out[0])


def bessel_j_prime(mu, x):
    """``J_mu'(x) = -J_{mu+1}(x) + (mu/x) J_mu(x)`` for ``x > 0``."""
    x = np.asarray(x, dtype=float)
    return -bessel_j(mu + 1, x) + mu / x * bessel_j(mu, x)


def bessel_i_prime(mu, x):
    """``I_mu'(x) = I_{mu+1}(x) + (mu/x) I_mu(x)`` for ``x > 0``."""
    x = np.asarray(x, dtype=float)
    return bessel_i(mu + 1, x) + mu / x * bessel_i(mu, x)


def cross_product(mu, x):
    """``J_mu I_mu' - J_mu' I_mu``, evaluated as ``J_mu I_{mu+1} + I_mu J_{mu+1}``."""
    return bessel_j(mu, x) * bessel_i(mu + 1, x) + bessel_i(mu, x) * bessel_j(mu + 1, x)


def _first_root(fn, start, stop, step=0.05, tol=1e-12):
    x0 = start
    f0 = fn(x0)
    x1 = x0 + step
    while x1 <= stop:
        f1 = fn(x1)
        if f0 == 0.0:
            return x0
        if f0 * f1 < 0:
            break
        x0, f0 = x1, f1
        x1 += step
    else:
        raise BracketError(f"no sign change of the function in ({start}, {stop}]")
    lo, hi = x0, x1
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (f0 > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def first_zero_j(mu):
    """First positive zero ``j_{mu,1}`` of ``J_mu``."""
    mu = _check_order(mu)
    if mu > 20:
        raise BracketError(f"order {mu} outside the supported range [0, 20]")
    return _first_root(lambda x: bessel_j(mu, x), 0.05, mu + 20.0)


def cross_product_zero(mu):
    """First positive zero ``h_mu`` of the ``J_mu``/``I_mu`` cross product."""
    mu = _check_order(mu)
    if mu > 20:
        raise BracketError(f"order {mu} outside the supported range [0, 20]")
    return _first_root(lambda x: cross_product(mu, x), 0.05, mu + 20.0, tol=1e-13)

"""Truncated Taylor series ("jets") evaluated on arrays of base points.

A jet of order ``m`` is an array of shape ``(m + 1, N)`` whose row ``j`` holds
``f^{(j)}(t) / j!`` at each of the ``N`` base points.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import bernoulli

# g(y) = coth(y) - 1/y = sum_k 2^(2k) B_2k y^(2k-1) / (2k)!, convergent for |y| < pi
_G_TERMS = 24
_G_SWITCH = 0.5
_bern = bernoulli(2 * _G_TERMS)
_G_SERIES = np.polynomial.Polynomial(
    [0.0 if j % 2 == 0 else 2.0 ** (j + 1) * _bern[j + 1] / math.factorial(j + 1)
     for j in range(2 * _G_TERMS)])


def mul(a, b):
    m = min(len(a), len(b)) - 1
    out = np.zeros((m + 1,) + np.shape(a[0]))
    for k in range(m + 1):
        for i in range(k + 1):
            out[k] += a[i] * b[k - i]
    return out


def div(a, b):
    m = min(len(a), len(b)) - 1
    out = np.zeros((m + 1,) + np.shape(a[0]))
    for k in range(m + 1):
        acc = np.array(a[k], dtype=float)
        for i in range(k):
            acc = acc - out[i] * b[k - i]
        out[k] = acc / b[0]
    return out


def deriv(a):
    """Jet of f' from a jet of f (one order lower)."""
    k = np.arange(1, len(a)).reshape((-1,) + (1,) * (a.ndim - 1))
    return a[1:] * k


def to_derivatives(a):
    """Convert normalized coefficients to plain derivatives."""
    fact = np.array([math.factorial(j) for j in range(len(a))], dtype=float)
    return a * fact.reshape((-1,) + (1,) * (a.ndim - 1))


def exponential(t, rate, order):
    """Jet of ``exp(rate * (t + h))`` scaled by ``exp(-rate * t)``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    coef = np.array([rate**j / math.factorial(j) for j in range(order + 1)])
    return np.repeat(coef[:, None], t.size, axis=1)


def coth(x, scale, order):
    """Jet in ``h`` of ``coth(x + scale * h)`` at the points ``x > 0``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    e = np.exp(-2.0 * x)
    ch = 0.5 * (1.0 + e)  # cosh(x) * exp(-x)
    sh = -0.5 * np.expm1(-2.0 * x)  # sinh(x) * exp(-x)
    num = np.empty((order + 1, x.size))
    den = np.empty((order + 1, x.size))
    for j in range(order + 1):
        c = scale**j / math.factorial(j)
        num[j] = c * (ch if j % 2 == 0 else sh)
        den[j] = c * (sh if j % 2 == 0 else ch)
    return div(num, den)


def coth_minus_reciprocal(y, scale, order):
    """Jet in ``h`` of ``g(y + scale * h)`` with ``g(y) = coth(y) - 1/y``.

    ``g`` is bounded and analytic at 0, so tiny ``scale`` and ``y`` are harmless.
    """
    y = np.asarray(y, dtype=float)
    shape = y.shape
    y = np.atleast_1d(y).ravel()
    out = np.empty((order + 1, y.size))
    small = y < _G_SWITCH
    if small.any():
        d = _G_SERIES
        for j in range(order + 1):
            out[j, small] = d(y[small]) * scale**j / math.factorial(j)
            d = d.deriv()
    if (~small).any():
        yb = y[~small]
        j = np.arange(order + 1)[:, None]
        out[:, ~small] = coth(yb, scale, order) - (-scale) ** j / yb[None, :] ** (j + 1)
    return out.reshape((order + 1,) + shape)


def reciprocal(t, order):
    """Jet of ``1 / (t + h)``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    j = np.arange(order + 1)[:, None]
    return (-1.0) ** j / t[None, :] ** (j + 1)

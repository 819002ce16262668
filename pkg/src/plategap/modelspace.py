"""Radial geometry of the constant-curvature model spaces.

Sectional curvature is ``-kappa**2``: ``kappa == 0`` is Euclidean space and
``kappa > 0`` is hyperbolic space.  Every function of the geodesic distance
``t`` from a fixed centre is handled through its Taylor jets, so iterated
Laplacians are exact up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import _jets
from .errors import SmoothnessError
from .report import SweepReport


@dataclass(frozen=True)
class ModelSpace:
    n: int
    kappa: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"dimension n must be an integer >= 2, got {self.n!r}")
        if not (self.kappa >= 0.0 and math.isfinite(self.kappa)):
            raise ValueError(f"kappa must be finite and >= 0, got {self.kappa!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "kappa", float(self.kappa))

    @property
    def euclidean(self) -> bool:
        return self.kappa == 0.0

    def laplacian_of_distance(self, t):
        """``(n - 1) ct_kappa(t)``, the exact Laplacian of the distance function."""
        return (self.n - 1) * ct_kappa(t, self.kappa)


def _positive(t):
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)):
        raise ValueError("radius must be > 0")
    return t


def ct_kappa(t, kappa):
    """``1/t`` for ``kappa == 0`` and ``kappa * coth(kappa * t)`` otherwise."""
    t = _positive(t)
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    if kappa == 0:
        out = 1.0 / t
    else:
        # 1/t + kappa g(kappa t) stays accurate for tiny kappa t
        out = 1.0 / t + kappa * _jets.coth_minus_reciprocal(kappa * t, 1.0, 0)[0]
    return out if out.ndim else float(out)


def _log_sinhc(x):
    # log(sinh(x) / x) for x >= 0
    x = np.asarray(x, dtype=float)
    small = x < 1e-3
    xs = np.where(small, x, 1.0)
    xb = np.where(small, 1.0, x)
    series = xs**2 / 6 - xs**4 / 180
    big = xb + np.log(-np.expm1(-2.0 * xb)) - np.log(2.0 * xb)
    return np.where(small, series, big)


def log_volume_weight(t, space: ModelSpace):
    """Logarithm of the polar density, stable for large ``kappa * t``."""
    t = _positive(t)
    if space.euclidean:
        out = (space.n - 1) * np.log(t)
    else:
        out = (space.n - 1) * (np.log(t) + _log_sinhc(space.kappa * t))
    return out if out.ndim else float(out)


def volume_weight(t, space: ModelSpace):
    """Polar-coordinate density: ``t**(n-1)`` or ``sinh(kappa t)**(n-1) / kappa**(n-1)``."""
    t = _positive(t)
    if space.euclidean:
        out = t ** (space.n - 1)
    else:
        # beyond the float range this is inf, silently
        x = space.kappa * t
        sinhc = np.where(x < 1e-3, 1 + x**2 / 6 + x**4 / 120, np.sinh(np.maximum(x, 1e-3)) / np.maximum(x, 1e-3))
        with np.errstate(over="ignore"):
            out = (t * sinhc) ** (space.n - 1)
    return out if out.ndim else float(out)


def comparison_jet(t, order, space: ModelSpace):
    """Jet of ``L(t) = (n - 1) ct_kappa(t)``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if space.euclidean:
        jet = _jets.reciprocal(t, order)
    else:
        k = space.kappa
        jet = _jets.reciprocal(t, order) + k * _jets.coth_minus_reciprocal(k * t, k, order)
    return (space.n - 1) * jet


def laplacian_jet(ujet, ljet):
    """Apply ``u'' + L u'`` to a jet, losing two orders."""
    d1 = _jets.deriv(ujet)
    return _jets.deriv(d1) + _jets.mul(ljet, d1)[: len(ujet) - 2]


@dataclass(frozen=True)
class RadialProfile:
    """A function of the radius, stored as an evaluator of its Taylor jets.

    ``taylor(t, m)`` returns an ``(m + 1, len(t))`` array whose row ``j`` is
    ``exp(decay * t) * u^(j)(t) / j!``.  The exponential factor keeps fast
    decaying profiles representable at large radii; the true derivatives come
    from :meth:`derivative`.  ``max_order=None`` means infinitely smooth
    between breakpoints.  The profile vanishes outside ``support``.
    """

    jet_fn: Callable
    support: tuple = (0.0, math.inf)
    breakpoints: tuple = ()
    decay: float = 0.0
    max_order: int | None = None
    name: str = "u"

    def taylor(self, t, order: int):
        if self.max_order is not None and order > self.max_order:
            raise SmoothnessError(
                f"profile {self.name!r} provides {self.max_order} derivatives, {order} requested"
            )
        t = np.atleast_1d(np.asarray(t, dtype=float))
        lo, hi = self.support
        inside = (t >= lo) & (t < hi)
        out = np.zeros((order + 1, t.size))
        if inside.any():
            out[:, inside] = self.jet_fn(t[inside], order)
        return out

    def scaled(self, t, order: int = 0):
        """``exp(decay * t) * u^(order)(t)``."""
        return self.taylor(t, order)[order] * math.factorial(order)

    def derivative(self, t, order: int = 0):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        with np.errstate(under="ignore"):
            out = self.scaled(t_arr, order) * np.exp(-self.decay * t_arr)
        return out if np.ndim(t) else float(out[0])

    def value(self, t):
        return self.derivative(t, 0)

    def d1(self, t):
        return self.derivative(t, 1)

    def d2(self, t):
        return self.derivative(t, 2)

    def at_breakpoint(self, t, rtol=1e-14) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        hit = np.zeros(t.shape, dtype=bool)
        for b in self.breakpoints:
            hit |= np.abs(t - b) <= rtol * max(1.0, abs(b))
        return hit

    # constructors

    @classmethod
    def polynomial(cls, coef, support=(0.0, 1.0), name="poly"):
        """Polynomial ``sum coef[i] t**i`` on ``support``, zero elsewhere.

        ``coef`` may also be a :class:`numpy.polynomial.Polynomial`, which keeps
        its own domain mapping (useful for polynomials centred away from 0).
        """
        if isinstance(coef, np.polynomial.Polynomial):
            P = coef
        else:
            P = np.polynomial.Polynomial(np.asarray(coef, dtype=float))

        def jet(t, order):
            out = np.empty((order + 1, t.size))
            d = P
            for j in range(order + 1):
                out[j] = d(t) / math.factorial(j)
                d = d.deriv()
            return out

        bps = tuple(b for b in support if 0 < b < math.inf)
        return cls(jet, tuple(map(float, support)), bps, 0.0, None, name)

    @classmethod
    def bump(cls, power: int, factor=(1.0,), radius: float = 1.0, name="bump"):
        """``(1 - (t/R)^2)**power * q((t/R)^2)`` on ``[0, R]`` with ``q`` given by ``factor``."""
        base = np.polynomial.Polynomial([1.0, 0.0, -1.0 / radius**2]) ** power
        q = np.polynomial.Polynomial(np.asarray(factor, dtype=float))
        x2 = np.polynomial.Polynomial([0.0, 0.0, 1.0 / radius**2])
        return cls.polynomial((base * q(x2)).coef, (0.0, radius), name)

    @classmethod
    def exponential(cls, rate: float, name="exp"):
        """``exp(-rate * t)`` on ``[0, inf)``."""

        def jet(t, order):
            return _jets.exponential(t, -rate, order)

        return cls(jet, (0.0, math.inf), (), float(rate), None, name)

    @classmethod
    def constant(cls, c: float = 1.0):
        def jet(t, order):
            out = np.zeros((order + 1, t.size))
            out[0] = c
            return out

        return cls(jet, (0.0, math.inf), (), 0.0, None, "const")

    @classmethod
    def from_callables(cls, value, d1, d2, support=(0.0, math.inf), breakpoints=(),
                       name="u"):
        """Profile from explicit evaluators of ``u``, ``u'``, ``u''``."""

        def jet(t, order):
            fns = (value, d1, d2)
            return np.array([np.broadcast_to(fns[j](t), t.shape) / math.factorial(j)
                             for j in range(order + 1)])

        return cls(jet, tuple(map(float, support)), tuple(sorted(breakpoints)), 0.0, 2, name)

    def with_name(self, name):
        return replace(self, name=name)


def radial_laplacian(u: RadialProfile, t, space: ModelSpace):
    """``u''(t) + (n - 1) ct_kappa(t) u'(t)``."""
    t_arr = _positive(np.atleast_1d(t))
    if u.at_breakpoint(t_arr).any():
        raise SmoothnessError("second derivative undefined at a breakpoint of the profile")
    jet = laplacian_jet(u.taylor(t_arr, 2), comparison_jet(t_arr, 1, space))
    with np.errstate(under="ignore"):
        out = jet[0] * np.exp(-u.decay * t_arr)
    return out if np.ndim(t) else float(out[0])


def radial_laplacian_iter(u: RadialProfile, k: int, space: ModelSpace) -> RadialProfile:
    """Profile of the ``k``-fold Laplacian, computed branchwise and exactly."""
    if int(k) != k or k < 1:
        raise ValueError("k must be a positive integer")
    k = int(k)
    if u.max_order is not None and 2 * k > u.max_order:
        raise SmoothnessError(
            f"{2 * k} derivatives needed for Laplacian power {k}, profile has {u.max_order}"
        )

    def jet(t, order):
        m = order + 2 * k
        cur = u.jet_fn(t, m)
        ljet = comparison_jet(t, m - 1, space)
        for _ in range(k):
            cur = laplacian_jet(cur, ljet[: len(cur) - 1])
        return cur

    max_order = None if u.max_order is None else u.max_order - 2 * k
    suffix = "" if k == 1 else f"^{k}"
    return RadialProfile(jet, u.support, u.breakpoints, u.decay, max_order,
                         f"Lap{suffix}({u.name})")


def laplace_comparison_check(space: ModelSpace, grid) -> SweepReport:
    """Tabulate ``(n-1) ct_kappa(t) >= (n-1) kappa`` on ``grid``.

    On the model space the distance Laplacian equals ``(n-1) ct_kappa`` exactly,
    so the rows record how far it sits above its curvature floor.
    """
    grid = _positive(np.atleast_1d(grid))
    lap = np.atleast_1d(space.laplacian_of_distance(grid))
    floor = (space.n - 1) * space.kappa
    rep = SweepReport("T2.1", "Laplace comparison on the model space",
                      {"n": space.n, "kappa": space.kappa},
                      columns=("t", "laplacian_rho", "floor", "margin"))
    for t, v in zip(grid, lap):
        rep.add(float(t), float(v), floor, float(v - floor), v - floor >= 0.0)
    return rep

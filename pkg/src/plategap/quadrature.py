"""Weighted radial integration and the Rayleigh-quotient functionals built on it.

Integrals of radial functions over a model space reduce to one-dimensional
integrals against :func:`~plategap.modelspace.volume_weight`.  The engine is an
adaptive, vectorized Gauss-Legendre panel rule; panels are always split at the
profile breakpoints and, for ``|X|**p`` integrands, at the sign changes of ``X``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateProfileError, QuadratureError
from .modelspace import (
    ModelSpace,
    RadialProfile,
    log_volume_weight,
    radial_laplacian_iter,
)

DEFAULT_REL_TOL = 1e-9
PANEL_BUDGET = 100_000
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(20)


def _panel_sums(g, a, b):
    """Gauss-Legendre sums of ``g`` over each panel ``[a_i, b_i]``."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    t = mid[:, None] + half[:, None] * _NODES[None, :]
    vals = np.asarray(g(t.ravel()), dtype=float).reshape(t.shape)
    # overflow shows up as inf/nan in the sums and is reported by the callers
    with np.errstate(over="ignore", invalid="ignore"):
        return half * (vals @ _WEIGHTS)


def adaptive_integrate(g, a, b, rel_tol=DEFAULT_REL_TOL, abs_tol=0.0, splits=(),
                       budget=PANEL_BUDGET):
    """Integrate a vectorized ``g`` over a finite ``[a, b]``.

    Each panel is compared with the sum over its two halves; panels whose
    disagreement exceeds their share of the tolerance are bisected.
    Returns ``(value, error_estimate)``.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("adaptive_integrate needs a finite interval")
    if b <= a:
        return 0.0, 0.0
    edges = np.unique(np.clip(np.r_[a, [s for s in splits if a < s < b], b], a, b))
    lo, hi = edges[:-1], edges[1:]
    length = b - a
    done_val = 0.0
    done_err = 0.0
    n_panels = len(lo)
    while True:
        mid = 0.5 * (lo + hi)
        whole = _panel_sums(g, lo, hi)
        halves = _panel_sums(g, np.r_[lo, mid], np.r_[mid, hi])
        with np.errstate(invalid="ignore"):
            fine = halves[: len(lo)] + halves[len(lo):]
            err = np.abs(fine - whole)
        total = done_val + fine.sum()
        tol = max(rel_tol * abs(total), abs_tol)
        ok = err <= tol * (hi - lo) / length
        # disagreement at rounding level is accepted regardless of tolerance
        ok |= err <= 4 * np.finfo(float).eps * np.abs(fine)
        done_val += fine[ok].sum()
        done_err += err[ok].sum()
        if ok.all():
            return float(done_val), float(done_err)
        lo, hi, mid = lo[~ok], hi[~ok], mid[~ok]
        n_panels += len(lo)
        if n_panels > budget:
            best = float(done_val + fine[~ok].sum())
            raise QuadratureError(
                f"quadrature did not converge within {budget} panels",
                best, float(done_err + err[~ok].sum()),
            )
        lo, hi = np.r_[lo, mid], np.r_[mid, hi]


def _integrate_to_infinity(g, a, rel_tol, splits):
    total, err = 0.0, 0.0
    start, width, quiet = a, 1.0, 0
    fin = sorted(s for s in splits if s > a and math.isfinite(s))
    # integrate up to the last split point first, then march outward in doubling chunks
    if fin:
        total, err = adaptive_integrate(g, a, fin[-1], rel_tol, splits=fin)
        start = fin[-1]
    for _ in range(200):
        v, e = adaptive_integrate(g, start, start + width, rel_tol, abs_tol=0.0)
        total += v
        err += e
        start += width
        width *= 2.0
        if abs(v) <= 0.1 * rel_tol * abs(total):
            quiet += 1
            if quiet >= 2:
                return total, err
        else:
            quiet = 0
    raise QuadratureError("tail of the integrand does not decay", total, err)


def integrate_radial(f, interval, space: ModelSpace, splits=(), rel_tol=DEFAULT_REL_TOL):
    """``int_a^b f(t) volume_weight(t) dt`` with panels split at ``splits``.

    ``b`` may be ``inf`` for integrands that decay exponentially against the
    weight.
    """
    if not (0.0 < rel_tol <= 1e-2):
        raise ValueError("rel_tol must lie in (0, 1e-2]")
    a, b = map(float, interval)
    if not (0.0 <= a <= b):
        raise ValueError("interval must satisfy 0 <= a <= b")

    def g(t):
        with np.errstate(over="ignore", under="ignore"):
            return np.asarray(f(t), dtype=float) * np.exp(log_volume_weight(t, space))

    return integrate_weighted(g, (a, b), splits, rel_tol)


def integrate_weighted(g, interval, splits=(), rel_tol=DEFAULT_REL_TOL):
    """Integrate an integrand that already includes the volume weight."""
    a, b = map(float, interval)
    if math.isinf(b):
        val, _ = _integrate_to_infinity(g, a, rel_tol, splits)
    else:
        val, _ = adaptive_integrate(g, a, b, rel_tol, splits=splits)
    return val


# --- functionals of radial profiles -------------------------------------------

_KIND_ORDER = {"value": 0, "gradient": 1}


def _field(u: RadialProfile, kind: str, space: ModelSpace):
    """Profile ``X`` and derivative order ``j`` with ``X^(j)`` the requested field."""
    if kind in _KIND_ORDER:
        return u, _KIND_ORDER[kind]
    if kind == "laplacian":
        return radial_laplacian_iter(u, 1, space), 0
    raise ValueError(f"unknown functional kind {kind!r}")


def _sign_changes(x_fn, a, b, samples=257):
    t = np.linspace(a, b, samples)[1:-1]
    y = x_fn(t)
    roots = []
    for i in np.nonzero(np.sign(y[:-1]) * np.sign(y[1:]) < 0)[0]:
        roots.append(brentq(lambda s: float(x_fn(np.array([s]))[0]), t[i], t[i + 1],
                            xtol=1e-14, rtol=4 * np.finfo(float).eps))
    return roots


def _domain(u: RadialProfile, interval):
    lo, hi = u.support
    if interval is not None:
        lo, hi = max(lo, interval[0]), min(hi, interval[1])
    return float(lo), float(hi)


def power_integral(X: RadialProfile, order: int, p: float, space: ModelSpace,
                   interval=None, log_weight=None, rel_tol=DEFAULT_REL_TOL):
    """``int |X^(order)(t)|**p  exp(log_weight(t)) volume_weight(t) dt``.

    Computed in log space so profiles with large exponential decay and large
    hyperbolic weights do not overflow.  Panels split at breakpoints and, unless
    ``p`` is an even integer, at the sign changes of ``X^(order)``.
    """
    a, b = _domain(X, interval)
    if b <= a:
        return 0.0

    def field(t):
        return X.scaled(t, order)

    def g(t):
        with np.errstate(divide="ignore", over="ignore", under="ignore", invalid="ignore"):
            x = np.abs(field(t))
            out = np.exp(p * np.log(x) - p * X.decay * t + log_volume_weight(t, space)
                         + (0.0 if log_weight is None else log_weight(t)))
        return np.where(x > 0, out, 0.0)

    splits = [s for s in X.breakpoints if a < s < b]
    even = float(p).is_integer() and int(p) % 2 == 0
    if not even:
        edges = [a, *splits, b if math.isfinite(b) else max(a, *splits, a + 1) + 50.0]
        for lo, hi in zip(edges[:-1], edges[1:]):
            splits += _sign_changes(field, lo, hi)
    return integrate_weighted(g, (a, b), sorted(splits), rel_tol)


def lp_functional(u: RadialProfile, p: float, kind: str, space: ModelSpace,
                  domain_interval=None, rel_tol=DEFAULT_REL_TOL):
    """``int |X|^p dv`` with ``X`` the value, radial derivative or Laplacian of ``u``."""
    if not p > 1:
        raise ValueError("p must be > 1")
    X, order = _field(u, kind, space)
    return power_integral(X, order, p, space, domain_interval, rel_tol=rel_tol)


def rayleigh_quotient(u: RadialProfile, p: float, kind: str, space: ModelSpace,
                      rel_tol=DEFAULT_REL_TOL):
    """Clamped ``|Lap u|^p/|u|^p``, buckling ``|Lap u|^2/|u'|^2`` or membrane ``|u'|^p/|u|^p``."""
    if kind == "clamped":
        num, den = ("laplacian", "value")
    elif kind == "buckling":
        if p != 2:
            raise ValueError("the buckling quotient is defined for p = 2 only")
        num, den = ("laplacian", "gradient")
    elif kind == "membrane":
        num, den = ("gradient", "value")
    else:
        raise ValueError(f"unknown quotient kind {kind!r}")
    d = lp_functional(u, p, den, space, rel_tol=rel_tol)
    if d == 0.0:
        raise DegenerateProfileError(f"{kind} quotient has a vanishing denominator")
    return lp_functional(u, p, num, space, rel_tol=rel_tol) / d


def product_integral(u: RadialProfile, ju: int, v: RadialProfile, jv: int,
                     space: ModelSpace, rel_tol=DEFAULT_REL_TOL, abs_tol=0.0):
    """``int u^(ju) v^(jv) dv`` over the common support of both profiles."""
    a = max(u.support[0], v.support[0])
    b = min(u.support[1], v.support[1])
    if b <= a:
        return 0.0
    rate = u.decay + v.decay

    def g(t):
        with np.errstate(over="ignore", under="ignore"):
            return (u.scaled(t, ju) * v.scaled(t, jv)
                    * np.exp(log_volume_weight(t, space) - rate * t))

    splits = sorted({s for s in (*u.breakpoints, *v.breakpoints) if a < s < b})
    if math.isinf(b):
        return _integrate_to_infinity(g, a, rel_tol, splits)[0]
    return adaptive_integrate(g, a, b, rel_tol, abs_tol, splits)[0]


def green_identity_residual(u: RadialProfile, v: RadialProfile, space: ModelSpace,
                            rel_tol=1e-12):
    """``|int u Lap v - int v Lap u|`` over the model space."""
    if max(u.support[0], v.support[0]) >= min(u.support[1], v.support[1]):
        return 0.0
    lu = radial_laplacian_iter(u, 1, space)
    lv = radial_laplacian_iter(v, 1, space)
    return abs(product_integral(u, 0, lv, 0, space, rel_tol)
               - product_integral(v, 0, lu, 0, space, rel_tol))


def integration_by_parts_residual(u: RadialProfile, v: RadialProfile, space: ModelSpace,
                                  rel_tol=1e-12):
    """Relative size of ``int u Lap v + int u' v'``."""
    lv = radial_laplacian_iter(v, 1, space)
    a = product_integral(u, 0, lv, 0, space, rel_tol)
    b = product_integral(u, 1, v, 1, space, rel_tol)
    scale = max(abs(a), abs(b))
    return abs(a + b) / scale if scale else 0.0

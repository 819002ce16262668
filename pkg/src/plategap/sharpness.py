"""Truncated exponential test functions and the sweeps that drive quotients to the gap constants.

``u_delta(t) = phi(t) exp(-s t)`` with the plateau function ``phi`` that rises
linearly on ``[delta/2, delta/2 + 1]``, equals one up to ``delta - 1`` and falls
back to zero at ``delta``.  With ``s = (n-1) kappa / p`` the weighted integrand
``exp(-p s t) sinh^(n-1)(kappa t)`` is bounded, so Rayleigh quotients of
``u_delta`` converge to the sharp constants as ``delta`` grows.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize_scalar

from . import _jets
from .errors import HypothesisError
from .modelspace import ModelSpace, RadialProfile, log_volume_weight, radial_laplacian_iter
from .quadrature import DEFAULT_REL_TOL, power_integral
from .report import SweepReport

DEFAULT_DELTAS = (8, 16, 32, 64, 128, 256, 500)
# quotients that equal their constant up to exp(-delta) are compared with this relative slack
ROUNDOFF_SLACK = 1e-12
KINDS = ("clamped", "buckling", "higher_order_clamped", "higher_order_buckling")


def _check_delta(delta):
    if not delta > 4:
        raise ValueError(f"delta must exceed 4, got {delta}")


def truncation_phi(t, delta):
    """The four-branch plateau function."""
    _check_delta(delta)
    t = np.asarray(t, dtype=float)
    h = delta / 2
    out = np.where((t >= h) & (t <= h + 1), t - h, 0.0)
    out = np.where((t > h + 1) & (t < delta - 1), 1.0, out)
    out = np.where((t >= delta - 1) & (t <= delta), delta - t, out)
    return out if out.ndim else float(out)


def _phi_branch(t, delta):
    # value and slope, taking the right-hand branch at the kinks
    h = delta / 2
    slope = np.select([t < h, t < h + 1, t < delta - 1, t < delta], [0.0, 1.0, 0.0, -1.0], 0.0)
    return truncation_phi(t, delta), slope


def decay_rate(space: ModelSpace, p: float) -> float:
    return (space.n - 1) * space.kappa / p


def make_u_delta(delta, space: ModelSpace, p: float, rate: float | None = None) -> RadialProfile:
    """``phi(t) exp(-s t)`` with ``s = (n-1) kappa / p`` unless ``rate`` is given."""
    _check_delta(delta)
    if not space.kappa > 0:
        raise HypothesisError("the truncated exponential construction needs kappa > 0")
    s = decay_rate(space, p) if rate is None else float(rate)

    def jet(t, order):
        phi, slope = _phi_branch(t, delta)
        lin = np.zeros((order + 1, t.size))
        lin[0] = phi
        if order >= 1:
            lin[1] = slope
        return _jets.mul(lin, _jets.exponential(t, -s, order))

    d = float(delta)
    return RadialProfile(jet, (d / 2, d), (d / 2, d / 2 + 1, d - 1, d), s, None,
                         f"u_delta({d:g})")


def _half_minus(x):
    # 1/2 - exp(-x)/2, accurate for small x
    return -0.5 * np.expm1(-x)


def bound_E1(delta, n, kappa, p, gradient: bool = False):
    """Closed-form lower bound of ``int |u_delta|^p``.

    ``gradient=True`` gives the bound of ``int |grad u_delta|^2`` used for the
    buckling quotient, which carries an extra factor ``s^2`` with ``s = (n-1) kappa / 2``.
    """
    _check_delta(delta)
    e1 = kappa ** (1 - n) * (delta / 2 - 2) * _half_minus(kappa * delta + 2 * kappa) ** (n - 1)
    if gradient:
        e1 *= ((n - 1) * kappa / 2) ** 2
    return float(e1)


def _boundary_integrand(t, delta, n, kappa, p):
    """``|Lap u_delta|^p`` times the volume weight, in closed form on the rising/falling branches."""
    s = (n - 1) * kappa / p
    phi, slope = _phi_branch(t, delta)
    c = 1 / np.tanh(kappa * t)
    x = s * (p * c - 2) * slope + s**2 * (1 - p * c) * phi
    return np.abs(x) ** p * _half_minus(2 * kappa * t) ** (n - 1) / kappa ** (n - 1)


def boundary_maxima(delta, n, kappa, p, samples=2001):
    """Maxima of the boundary-layer integrand on ``[delta/2, delta/2+1]`` and ``[delta-1, delta]``."""
    _check_delta(delta)
    out = []
    eps = 1e-12 * delta
    for lo, hi in ((delta / 2, delta / 2 + 1), (delta - 1, delta)):
        lo_i, hi_i = lo + eps, hi - eps
        t = np.linspace(lo_i, hi_i, samples)
        f = _boundary_integrand(t, delta, n, kappa, p)
        i = int(np.argmax(f))
        a, b = t[max(i - 1, 0)], t[min(i + 1, samples - 1)]
        res = minimize_scalar(lambda x: -float(_boundary_integrand(np.array([x]), delta, n, kappa, p)[0]),
                              bounds=(a, b), method="bounded", options={"xatol": 1e-12})
        out.append(max(float(f[i]), -float(res.fun)))
    return tuple(out)


def bound_E2(delta, n, kappa, p):
    """Closed-form upper bound of ``int |Lap u_delta|^p`` with numerically maximized boundary terms."""
    _check_delta(delta)
    s = (n - 1) * kappa / p
    m1, m2 = boundary_maxima(delta, n, kappa, p)
    plateau = (s ** (2 * p) / kappa ** (n - 1) * (delta / 2 - 2)
               * (p / math.tanh((delta / 2 + 1) * kappa) - 1) ** p
               * _half_minus(2 * kappa * (delta - 1)) ** (n - 1))
    return float(m1 + m2 + plateau)


def sharp_constant(kind, n, kappa, p=2.0, k=1, gradient=False):
    """Limit of the quotient for the given sweep kind."""
    if kind == "clamped":
        return ((n - 1) ** 2 * (p - 1) * kappa**2 / p**2) ** p
    if kind == "buckling":
        return (n - 1) ** 2 * kappa**2 / 4
    if kind == "higher_order_clamped":
        base = ((n - 1) ** 2 * (p - 1) * kappa**2 / p**2) ** (k * p)
        return base * ((n - 1) * kappa / p) ** p if gradient else base
    if kind == "higher_order_buckling":
        h = (n - 1) * kappa / 2
        return h ** (4 * k) if gradient else h ** (4 * k - 2)
    raise ValueError(f"unknown sweep kind {kind!r}")


_THEOREM = {"clamped": "T1.1", "buckling": "T1.2",
            "higher_order_clamped": "T4.3", "higher_order_buckling": "T4.4"}


def quotient(kind, delta, space: ModelSpace, p=2.0, k=1, gradient=False,
             rel_tol=DEFAULT_REL_TOL):
    """Rayleigh quotient of ``u_delta`` for a sweep kind, with its two integrals."""
    if kind in ("buckling", "higher_order_buckling") and p != 2:
        raise HypothesisError("buckling quotients are defined for p = 2 only")
    if kind in ("clamped", "buckling"):
        k, gradient = 1, False
    u = make_u_delta(delta, space, p)
    top = radial_laplacian_iter(u, k, space)
    num = power_integral(top, 1 if gradient else 0, p, space, rel_tol=rel_tol)
    if kind in ("clamped", "higher_order_clamped"):
        den = power_integral(u, 0, p, space, rel_tol=rel_tol)
    else:
        den = power_integral(u, 1, 2.0, space, rel_tol=rel_tol)
    return num / den, num, den


def sharpness_sweep(kind, n, kappa, p=2.0, delta_list=DEFAULT_DELTAS, k=1, gradient=False,
                    rel_tol=DEFAULT_REL_TOL) -> SweepReport:
    """Quotients of ``u_delta`` along ``delta_list`` against the sharp constant.

    Rows hold ``(delta, quotient, limit, rel_gap)``.  For ``clamped`` and
    ``buckling`` a row passes when the two integrals respect the closed-form
    bounds ``E1`` and ``E2``.  ``above_limit`` is recorded but does not gate:
    derivatives are taken branchwise, so the kinks of ``phi`` add nothing and
    a quotient may sit below the constant (by ``O(exp(-delta))`` for clamped
    ``p = 2``, by ``O(1/delta)`` for buckling).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown sweep kind {kind!r}; choose from {', '.join(KINDS)}")
    deltas = [float(d) for d in delta_list]
    if any(d < 8 for d in deltas) or any(b <= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("deltas must be increasing and >= 8")
    if not (k >= 1 and int(k) == k):
        raise ValueError("k must be a positive integer")
    space = ModelSpace(n, kappa)
    limit = sharp_constant(kind, n, kappa, p, k, gradient)
    rep = SweepReport(_THEOREM[kind], f"sharpness of the {kind} constant",
                      dict(kind=kind, n=n, kappa=kappa, p=p, k=k, gradient=gradient),
                      columns=("delta", "quotient", "limit", "rel_gap"))
    envelopes = []
    for d in deltas:
        q, num, den = quotient(kind, d, space, p, k, gradient, rel_tol)
        above = q >= limit * (1 - ROUNDOFF_SLACK)
        m1, m2 = layer_maxima(kind, d, space, p, k, gradient)
        extra = {"numerator": num, "denominator": den, "above_limit": above, "M1": m1, "M2": m2}
        ok = True
        if kind in ("clamped", "buckling"):
            e1 = bound_E1(d, n, kappa, p, gradient=(kind == "buckling"))
            e2 = bound_E2(d, n, kappa, p)
            inside = q <= e2 / e1 and den >= e1 and num <= e2
            extra.update(E1=e1, E2=e2, envelope=e2 / e1, within_envelope=inside)
            ok = inside
            envelopes.append((d, e2 / e1))
        rep.add(d, q, limit, (q - limit) / limit, ok, **extra)
    gaps = [abs(r.residual) for r in rep.rows]
    rep.checks["final_gap_smallest"] = gaps[-1] <= min(gaps) + ROUNDOFF_SLACK
    late = [e for d, e in envelopes if d >= 32]
    if len(late) > 1:
        rep.checks["envelope_decreasing"] = all(b < a for a, b in zip(late, late[1:]))
    return rep


def layer_maxima(kind, delta, space: ModelSpace, p=2.0, k=1, gradient=False, samples=2001):
    """Maxima of the weighted numerator integrand on the rising and falling ramps.

    Sampled from the exact branchwise jets, so it applies to every ``k``; for
    ``k = 1`` it reproduces the closed-form boundary maxima.
    """
    if kind in ("clamped", "buckling"):
        k, gradient = 1, False
    u = make_u_delta(delta, space, p)
    top = radial_laplacian_iter(u, k, space)
    order = 1 if gradient else 0
    out = []
    eps = 1e-12 * delta
    for lo, hi in ((delta / 2, delta / 2 + 1), (delta - 1, delta)):
        t = np.linspace(lo + eps, hi - eps, samples)
        with np.errstate(divide="ignore", under="ignore"):
            logf = (p * np.log(np.abs(top.scaled(t, order))) - p * top.decay * t
                    + log_volume_weight(t, space))
        out.append(float(np.exp(logf.max())))
    return tuple(out)

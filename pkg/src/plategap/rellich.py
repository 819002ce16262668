"""Numerical Rellich and Hardy quotients for radial test functions.

Each mode evaluates the two sides of one inequality by weighted quadrature
and compares their ratio with the sharp constant.  Singular weights
``rho^-q`` are only integrated after checking that the test function vanishes
fast enough at the centre (or is supported away from it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateProfileError, HypothesisError
from .modelspace import ModelSpace, RadialProfile, radial_laplacian_iter
from .quadrature import DEFAULT_REL_TOL, power_integral
from .report import SweepReport
from .riccati import check_weighted_rellich_hypotheses, rellich_bessel_constants, rellich_hyperbolic_constants
from .sharpness import make_u_delta

MODES = ("weighted", "higher_order_1", "higher_order_2", "bessel", "hyperbolic", "gradient", "hardy")
_REL_TOL = DEFAULT_REL_TOL


@dataclass
class RellichCheck:
    mode: str
    theorem: str
    quotient: float
    constant: float
    passed: bool
    terms: dict = field(default_factory=dict)


def _log_power(q):
    return lambda t: -q * np.log(t)


def _log_sinh2(kappa):
    def f(t):
        x = kappa * t
        return -2.0 * (x + np.log(-np.expm1(-2.0 * x)) - math.log(2.0))
    return f


def _vanishing_order(u: RadialProfile, max_order=8):
    if u.support[0] > 0:
        return math.inf
    jet = u.jet_fn(np.array([0.0]), max_order)[:, 0]
    scale = np.abs(jet).max()
    for j, c in enumerate(jet):
        if abs(c) > 1e-13 * scale:
            return j
    return max_order + 1


def check_integrable(u: RadialProfile, q, n, p):
    """Reject ``int |u|^p rho^-q dv`` when it diverges at the centre."""
    m = _vanishing_order(u)
    if m * p + n - q <= 0:
        raise HypothesisError(
            f"|u|^p / rho^{q:g} is not integrable at the centre in dimension {n} "
            f"(u vanishes to order {m})"
        )


def _ratio(num, den, what):
    if den == 0.0:
        raise DegenerateProfileError(f"{what} integral vanishes")
    return num / den


def lambda_r1(n, p, k):
    return math.prod((n / p - 2 * s) ** p * (n * (p - 1) / p + 2 * s - 2) ** p
                     for s in range(1, k + 1))


def lambda_r2(n, p, k):
    return ((n - p) / p) ** p * math.prod((n / p - 2 * s - 1) ** p * (n * (p - 1) / p + 2 * s - 1) ** p
                                          for s in range(1, k + 1))


def rellich_quotient_check(u: RadialProfile, mode: str, n: int, p: float = 2.0,
                           gamma: float = 0.0, kappa: float = 0.0, k: int = 1,
                           rel_tol: float = _REL_TOL) -> RellichCheck:
    """Quotient ``LHS / RHS-integral`` of one Rellich-type inequality for ``u``.

    ``kappa`` selects the model space the integrals live on; it must be positive
    for ``hyperbolic``.  ``bessel`` needs ``u`` supported in the unit ball.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {', '.join(MODES)}")
    space = ModelSpace(n, kappa)

    if mode == "weighted":
        check_weighted_rellich_hypotheses(n, p, gamma)
        q = (2 - gamma) * p
        check_integrable(u, q, n, p)
        lhs = power_integral(radial_laplacian_iter(u, 1, space), 0, p, space,
                             log_weight=lambda t: gamma * p * np.log(t), rel_tol=rel_tol)
        rhs = power_integral(u, 0, p, space, log_weight=_log_power(q), rel_tol=rel_tol)
        const = (n / p - 2 + gamma) ** p * (n * (p - 1) / p - gamma) ** p
        quot = _ratio(lhs, rhs, "weighted")
        return RellichCheck(mode, "R5.2" if gamma == 0 else "T5.1", quot, const, quot >= const,
                            dict(lhs=lhs, rhs=rhs))

    if mode in ("higher_order_1", "higher_order_2"):
        if n < 5:
            raise HypothesisError(f"n >= 5 required, got n={n}")
        if int(k) != k or k < 1:
            raise HypothesisError("k must be a positive integer")
        first = mode == "higher_order_1"
        q = (2 * k if first else 2 * k + 1) * p
        if not n > q:
            raise HypothesisError(f"n > {q:g} required, got n={n}")
        check_integrable(u, q, n, p)
        top = radial_laplacian_iter(u, k, space)
        lhs = power_integral(top, 0 if first else 1, p, space, rel_tol=rel_tol)
        rhs = power_integral(u, 0, p, space, log_weight=_log_power(q), rel_tol=rel_tol)
        const = lambda_r1(n, p, k) if first else lambda_r2(n, p, k)
        quot = _ratio(lhs, rhs, mode)
        return RellichCheck(mode, "T5.3", quot, const, quot >= const, dict(lhs=lhs, rhs=rhs, k=k))

    if mode == "hardy":
        if not 1 < p < n:
            raise HypothesisError(f"1 < p < n required, got p={p}, n={n}")
        check_integrable(u, p, n, p)
        lhs = power_integral(u, 1, p, space, rel_tol=rel_tol)
        rhs = power_integral(u, 0, p, space, log_weight=_log_power(p), rel_tol=rel_tol)
        const = ((n - p) / p) ** p
        quot = _ratio(lhs, rhs, "hardy")
        return RellichCheck(mode, "H5.2", quot, const, quot >= const, dict(lhs=lhs, rhs=rhs))

    # the remaining modes are p = 2 inequalities
    if n < 5:
        raise HypothesisError(f"n >= 5 required, got n={n}")
    lap = radial_laplacian_iter(u, 1, space)
    lhs = power_integral(lap, 0, 2.0, space, rel_tol=rel_tol)

    if mode == "bessel":
        if kappa != 0:
            raise HypothesisError("the Bessel-improved inequality is checked on Euclidean balls")
        if u.support[1] > 1.0:
            raise HypothesisError("u must be supported in the unit ball")
        check_integrable(u, 4, n, 2)
        c4, c2 = rellich_bessel_constants(n)
        i4 = power_integral(u, 0, 2.0, space, log_weight=_log_power(4), rel_tol=rel_tol)
        i2 = power_integral(u, 0, 2.0, space, log_weight=_log_power(2), rel_tol=rel_tol)
        rhs = c4 * i4 + c2 * i2
        quot = _ratio(lhs, rhs, "bessel")
        leading = _ratio(lhs, i4, "bessel")
        improved = (lhs - c4 * i4) / i2
        terms = dict(lhs=lhs, I4=i4, I2=i2, c4=c4, c2=c2, leading_quotient=leading,
                     leading_ok=leading >= c4, improved_quotient=improved,
                     improved_ok=improved >= c2)
        return RellichCheck(mode, "T5.4", quot, 1.0, quot >= 1.0 and leading >= c4, terms)

    if mode == "hyperbolic":
        if not kappa > 0:
            raise HypothesisError("kappa > 0 required")
        check_integrable(u, 2, n, 2)
        c0, c1, c2 = rellich_hyperbolic_constants(n, kappa)
        i0 = power_integral(u, 0, 2.0, space, rel_tol=rel_tol)
        i1 = power_integral(u, 0, 2.0, space, log_weight=_log_power(2), rel_tol=rel_tol)
        i2 = power_integral(u, 0, 2.0, space, log_weight=_log_sinh2(kappa), rel_tol=rel_tol)
        rhs = c0 * i0 + c1 * i1 + c2 * i2
        quot = _ratio(lhs, rhs, "hyperbolic")
        terms = dict(lhs=lhs, rhs=rhs, I0=i0, I_rho2=i1, I_sinh2=i2, c0=c0, c1=c1, c2=c2,
                     excess=lhs - rhs)
        return RellichCheck(mode, "T5.5", quot, 1.0, quot >= 1.0, terms)

    # gradient
    if n < 8:
        raise HypothesisError(f"n >= 8 required, got n={n}")
    rhs = power_integral(u, 1, 2.0, space, log_weight=_log_power(2), rel_tol=rel_tol)
    const = n**2 / 4
    quot = _ratio(lhs, rhs, "gradient")
    return RellichCheck(mode, "T5.6", quot, const, quot >= const, dict(lhs=lhs, rhs=rhs))


# --- random admissible test functions ----------------------------------------


def random_test_profile(rng: np.random.Generator, radius: float = 1.0, smoothness: int = 4,
                        annulus: bool | None = None) -> RadialProfile:
    """A random smooth radial bump supported in ``[0, radius]``.

    Either ``(1 - (t/R)^2)^m q((t/R)^2)`` on the ball or
    ``((t - a)(b - t))^m q(t)`` on an annulus ``[a, b]``, with ``m > smoothness``
    and a random quadratic ``q`` that stays positive.
    """
    if annulus is None:
        annulus = bool(rng.integers(2))
    m = int(smoothness) + 1 + int(rng.integers(3))
    q = [1.0, *rng.uniform(0.0, 2.0, size=2)]
    if not annulus:
        return RadialProfile.bump(m, q, radius, name=f"bump{m}")
    a, b = np.sort(rng.uniform(0.05, 1.0, size=2)) * radius
    if b - a < 0.1 * radius:
        a, b = 0.1 * radius, 0.9 * radius
    # expand in x = (t - a)/(b - a) to avoid cancellation in monomials of t
    x = np.polynomial.Polynomial([0.0, 1.0])
    poly = (4 * x * (1 - x)) ** m * np.polynomial.Polynomial(q)
    poly = np.polynomial.Polynomial(poly.coef, domain=[a, b], window=[0.0, 1.0])
    return RadialProfile.polynomial(poly, (float(a), float(b)), name=f"annulus{m}")


def _mode_defaults(mode, n, p, gamma, kappa, k):
    if mode == "hyperbolic" and not kappa > 0:
        kappa = 1.0
    if mode != "hyperbolic":
        kappa = 0.0 if mode == "bessel" else kappa
    if mode in ("bessel", "hyperbolic", "gradient"):
        p = 2.0
    return p, gamma, kappa, k


def rellich_sweep(mode: str, n: int, p: float = 2.0, gamma: float = 0.0, kappa: float = 0.0,
                  k: int = 1, samples: int = 10, seed: int = 0,
                  radius: float | None = None) -> SweepReport:
    """Quotients of ``samples`` random admissible profiles against the constant (zero tolerance)."""
    p, gamma, kappa, k = _mode_defaults(mode, n, p, gamma, kappa, k)
    rng = np.random.default_rng(seed)
    rep = None
    for i in range(samples):
        R = 1.0 if mode == "bessel" else (radius or float(rng.uniform(0.5, 3.0)))
        u = random_test_profile(rng, R, smoothness=2 * k + 2)
        chk = rellich_quotient_check(u, mode, n, p, gamma, kappa, k)
        if rep is None:
            rep = SweepReport(chk.theorem, f"{mode} Rellich-type quotient on random profiles",
                              dict(mode=mode, n=n, p=p, gamma=gamma, kappa=kappa, k=k,
                                   samples=samples, seed=seed),
                              columns=("sample", "quotient", "constant", "rel_excess"))
        extra = {"profile": u.name, "support_lo": u.support[0], "support_hi": u.support[1]}
        if mode == "bessel":
            extra.update(leading_ok=chk.terms["leading_ok"], improved_ok=chk.terms["improved_ok"])
        rep.add(i, chk.quotient, chk.constant, chk.quotient / chk.constant - 1, chk.passed, **extra)
    return rep


def hyperbolic_u_delta_check(n: int = 5, kappa: float = 1.0, delta: float = 64.0) -> RellichCheck:
    """Three-coefficient hyperbolic inequality evaluated on the truncated exponential ``u_delta``.

    Derivatives are taken branchwise, so the jumps of ``u_delta'`` at the four
    kinks contribute nothing to ``int |Lap u|^2``.
    """
    u = make_u_delta(delta, ModelSpace(n, kappa), 2.0)
    chk = rellich_quotient_check(u, "hyperbolic", n, 2.0, kappa=kappa)
    chk.terms["delta"] = float(delta)
    return chk

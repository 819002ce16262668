"""Riccati-type side conditions and the parameter families that saturate them.

Two residuals are provided.  The ordinary one, for inequalities between
``|Lap u|^p`` and ``|u|^p``::

    (p-1)[2(wGH)' + 2wGHL - p wGH^2 - w|G|^p'] - (wG)'' - (wG)'L - W

and the partial one, for inequalities between ``|Lap u|^2`` and ``|grad u|^2``::

    (WH)' + WHL - WH^2 - Lap G - G^2

with ``Lap G`` evaluated exactly on the model space.  A family passes when the
residual stays non-negative on its domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import HypothesisError, SmoothnessError
from .modelspace import ModelSpace, ct_kappa
from .report import SweepReport
from .specialfn import bessel_j, first_zero_j

FAMILIES = (
    "clamped_constant",
    "buckling_constant",
    "weighted_rellich",
    "rellich_bessel",
    "rellich_hyperbolic",
    "rellich_gradient",
)

ROUNDOFF_SLACK = -1e-10
GRID_SIZE = 2048


@dataclass(frozen=True)
class ParamFn:
    """A positive radial parameter function with hand-coded derivatives."""

    value: Callable
    d1: Callable
    d2: Callable | None = None
    name: str = ""

    def __call__(self, t):
        return self.value(t)

    def derivative(self, t, order):
        fn = (self.value, self.d1, self.d2)[order]
        if fn is None:
            raise SmoothnessError(f"parameter function {self.name!r} has no derivative {order}")
        return np.broadcast_to(fn(t), np.shape(t)).astype(float)

    def __add__(self, other):
        d2 = None
        if self.d2 is not None and other.d2 is not None:
            d2 = lambda t: self.d2(t) + other.d2(t)  # noqa: E731
        return ParamFn(lambda t: self.value(t) + other.value(t),
                       lambda t: self.d1(t) + other.d1(t), d2,
                       f"{self.name}+{other.name}")

    @classmethod
    def constant(cls, c, name="const"):
        c = float(c)
        zero = lambda t: np.zeros_like(np.asarray(t, dtype=float))  # noqa: E731
        return cls(lambda t: np.full_like(np.asarray(t, dtype=float), c), zero, zero, name)

    @classmethod
    def power(cls, c, e, name="power"):
        """``c * t**e``."""
        c, e = float(c), float(e)
        return cls(lambda t: c * np.asarray(t, dtype=float) ** e,
                   lambda t: c * e * np.asarray(t, dtype=float) ** (e - 1),
                   lambda t: c * e * (e - 1) * np.asarray(t, dtype=float) ** (e - 2),
                   name)


@dataclass(frozen=True)
class RiccatiSystem:
    L: ParamFn
    W: ParamFn
    w: ParamFn | None
    G: ParamFn
    H: ParamFn
    p: float
    space: ModelSpace
    mode: str = "ODI"
    family: str = "custom"
    params: dict = field(default_factory=dict)
    domain: tuple = (0.0, math.inf)

    def __post_init__(self):
        if not self.p > 1:
            raise ValueError("p must be > 1")
        if self.mode not in ("ODI", "PDI"):
            raise ValueError("mode must be 'ODI' or 'PDI'")
        if self.mode == "ODI" and self.w is None:
            raise ValueError("ODI systems need a weight w")
        if self.mode == "PDI" and self.p != 2:
            raise HypothesisError("the gradient inequality is available for p = 2 only")

    @property
    def conjugate(self):
        return self.p / (self.p - 1)


def odi_terms(sys: RiccatiSystem, t):
    """The seven signed terms of the ordinary residual, stacked on axis 0."""
    t = np.asarray(t, dtype=float)
    p = sys.p
    w, w1, w2 = (sys.w.derivative(t, j) for j in range(3))
    G, G1, G2 = (sys.G.derivative(t, j) for j in range(3))
    H, H1 = sys.H.derivative(t, 0), sys.H.derivative(t, 1)
    L = sys.L(t)
    W = sys.W(t)
    wGH1 = w1 * G * H + w * G1 * H + w * G * H1
    wG1 = w1 * G + w * G1
    wG2 = w2 * G + 2 * w1 * G1 + w * G2
    return np.stack([
        (p - 1) * 2 * wGH1,
        (p - 1) * 2 * w * G * H * L,
        -(p - 1) * p * w * G * H**2,
        -(p - 1) * w * np.abs(G) ** sys.conjugate,
        -wG2,
        -wG1 * L,
        -np.broadcast_to(W, t.shape),
    ])


def pdi_terms(sys: RiccatiSystem, t, generic: bool = False):
    """Signed terms of the partial residual.

    ``generic=True`` replaces the exact model-space ``Lap G`` by the upper bound
    ``G'' + G' L`` that holds on any manifold when ``G' <= 0``.
    """
    t = np.asarray(t, dtype=float)
    W, W1 = sys.W.derivative(t, 0), sys.W.derivative(t, 1)
    H, H1 = sys.H.derivative(t, 0), sys.H.derivative(t, 1)
    G, G1, G2 = (sys.G.derivative(t, j) for j in range(3))
    L = sys.L(t)
    if generic:
        lap_g = G2 + G1 * L
    else:
        lap_g = G2 + sys.space.laplacian_of_distance(t) * G1
    return np.stack([W1 * H + W * H1, W * H * L, -W * H**2, -lap_g, -G**2])


def _require(sys, mode):
    if sys.mode != mode:
        raise ValueError(f"system is in {sys.mode} mode, {mode} required")


def odi_residual_clamped(sys: RiccatiSystem, t):
    """Ordinary residual; non-negative exactly where the condition holds."""
    _require(sys, "ODI")
    r = odi_terms(sys, t).sum(axis=0)
    return r if np.ndim(t) else float(r)


def pdi_residual_buckling(sys: RiccatiSystem, t, generic: bool = False):
    """Partial residual on the model space; non-negative where the condition holds."""
    _require(sys, "PDI")
    r = pdi_terms(sys, t, generic).sum(axis=0)
    return r if np.ndim(t) else float(r)


def _residual_and_scale(sys, t, generic=False):
    terms = odi_terms(sys, t) if sys.mode == "ODI" else pdi_terms(sys, t, generic)
    return terms.sum(axis=0), np.abs(terms).sum(axis=0)


def _grid(sys, interval, grid_size):
    lo = max(interval[0], sys.domain[0])
    hi = min(interval[1], sys.domain[1])
    if sys.domain[1] < math.inf and hi >= sys.domain[1]:
        hi = sys.domain[1] * (1 - 1e-3)
    if not (0 < lo < hi < math.inf):
        raise ValueError(f"empty check interval {interval} for domain {sys.domain}")
    return np.geomspace(lo, hi, int(grid_size))


@dataclass
class ConditionReport:
    name: str
    max_value: float
    argmax: float
    passed: bool


def check_condition_C2(sys: RiccatiSystem, interval=(1e-3, 1e3), grid_size=GRID_SIZE):
    """Monotonicity ``(wG)' <= 0`` on a log grid (ordinary mode)."""
    _require(sys, "ODI")
    t = _grid(sys, interval, grid_size)
    u = sys.w.derivative(t, 1) * sys.G(t)
    v = sys.w(t) * sys.G.derivative(t, 1)
    d = u + v
    i = int(np.argmax(d))
    ok = np.all(d <= 1e-12 * np.maximum(1.0, np.abs(u) + np.abs(v)))
    return ConditionReport("(wG)' <= 0", float(d[i]), float(t[i]), bool(ok))


def _golden(f, a, b, iters=60):
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


@dataclass
class ResidualReport:
    family: str
    mode: str
    min_residual: float
    argmin: float
    min_relative: float
    grid: np.ndarray
    passed: bool
    positive: bool
    comparison_ok: bool
    c2: ConditionReport | None = None
    generic_min_relative: float | None = None
    tolerance: float = ROUNDOFF_SLACK

    def to_sweep(self, theorem: str) -> SweepReport:
        rep = SweepReport(theorem, f"side condition for {self.family}",
                          {"family": self.family, "mode": self.mode},
                          columns=("argmin", "min_residual", "tolerance", "min_relative"))
        rep.add(self.argmin, self.min_residual, self.tolerance, self.min_relative,
                self.passed)
        rep.checks["positive_parameters"] = self.positive
        rep.checks["L_below_distance_laplacian"] = self.comparison_ok
        if self.c2 is not None:
            rep.notes.append(f"C2 max {self.c2.max_value:.3e} at t={self.c2.argmax:.3e}")
        return rep


def verify_system(sys: RiccatiSystem, interval=(1e-3, 1e3), grid_size=GRID_SIZE,
                  tol=ROUNDOFF_SLACK) -> ResidualReport:
    """Sweep the residual over a log grid and refine around its smallest values.

    Pass/fail uses the residual relative to the sum of the absolute values of
    its terms, so saturated families with singular weights are judged at the
    rounding level of their own magnitudes.
    """
    t = _grid(sys, interval, grid_size)
    r, scale = _residual_and_scale(sys, t)
    rel = r / np.maximum(scale, np.finfo(float).tiny)

    def rel_at(s):
        rs, ss = _residual_and_scale(sys, np.array([s]))
        return float(rs[0] / max(ss[0], np.finfo(float).tiny))

    best_i = int(np.argmin(rel))
    best_t, best_rel = float(t[best_i]), float(rel[best_i])
    for i in np.argsort(rel)[:5]:
        if 0 < i < len(t) - 1:
            x, fx = _golden(rel_at, t[i - 1], t[i + 1])
            if fx < best_rel:
                best_t, best_rel = x, fx
    raw = _residual_and_scale(sys, np.array([best_t]))[0][0]
    i_raw = int(np.argmin(r))
    min_raw = float(min(raw, r[i_raw]))

    funcs = [sys.L, sys.W, sys.G, sys.H] + ([sys.w] if sys.w is not None else [])
    positive = all(bool(np.all(np.asarray(f(t)) >= 0)) for f in funcs)
    comparison_ok = bool(np.all(sys.L(t) <= sys.space.laplacian_of_distance(t) * (1 + 1e-14)))
    c2 = check_condition_C2(sys, interval, grid_size) if sys.mode == "ODI" else None
    generic = None
    if sys.mode == "PDI":
        rg, sg = _residual_and_scale(sys, t, generic=True)
        generic = float(np.min(rg / np.maximum(sg, np.finfo(float).tiny)))
    return ResidualReport(sys.family, sys.mode, min_raw, best_t, best_rel, t,
                          bool(best_rel >= tol), positive, comparison_ok, c2, generic, tol)


# --- closed-form optimizations ------------------------------------------------


@dataclass
class Maximizer:
    a: float
    b: float
    value: float
    grid_max: float
    confirmed: bool


def clamped_f(a, b, n, kappa, p):
    a = np.asarray(a, dtype=float)
    return (p - 1) * (2 * a * b * kappa * (n - 1) - a ** (p / (p - 1)) - a * b**2 * p)


def buckling_f(b, C, n, kappa):
    """``2 sqrt(C b (n-1) kappa - C b^2) - C``; ``-inf`` where the root is imaginary."""
    arg = np.asarray(C * b * (n - 1) * kappa - C * b**2, dtype=float)
    with np.errstate(invalid="ignore"):
        return np.where(arg >= 0, 2 * np.sqrt(np.maximum(arg, 0)) - C, -np.inf)


def weighted_rellich_f(a, b, n, p, gamma):
    a = np.asarray(a, dtype=float)
    return (a * (p - 1) * (2 * (b + 1) * n - (2 + b) ** 2 * p)
            + a * p * (2 * b * (p - 1) + 4 * p - n - 2) * gamma
            - a * p**2 * gamma**2
            - (p - 1) * a ** (p / (p - 1)))


def _grid_max(f, x_star, y_star, m=101):
    xs = np.linspace(x_star / 4, 4 * x_star, m)
    ys = np.linspace(y_star / 4, 4 * y_star, m)
    X, Y = np.meshgrid(xs, ys)
    return float(np.max(f(X, Y)))


def _confirm(value, grid_max):
    return grid_max <= value + 1e-8 * max(1.0, abs(value))


def maximize_clamped_f(n, kappa, p) -> Maximizer:
    if not (n >= 2 and kappa > 0 and p > 1):
        raise HypothesisError("need n >= 2, kappa > 0, p > 1")
    base = (n - 1) ** 2 * (p - 1) * kappa**2 / p**2
    a, b = base ** (p - 1), (n - 1) * kappa / p
    value = base**p
    gm = _grid_max(lambda x, y: clamped_f(x, y, n, kappa, p), a, b)
    return Maximizer(a, b, value, gm, _confirm(value, gm))


@dataclass
class BucklingMaximizer:
    b: float
    C: float
    gap: float
    a: float
    grid_max: float
    confirmed: bool


def maximize_buckling_f(n, kappa) -> BucklingMaximizer:
    if not (n >= 2 and kappa > 0):
        raise HypothesisError("need n >= 2, kappa > 0")
    b = (n - 1) * kappa / 2
    C = (n - 1) ** 2 * kappa**2 / 4
    a = math.sqrt(C * b * (n - 1) * kappa - C * b**2)
    gap = 2 * a - C
    gm = _grid_max(lambda x, y: buckling_f(x, y, n, kappa), b, C)
    return BucklingMaximizer(b, C, gap, a, gm, _confirm(gap, gm))


def check_weighted_rellich_hypotheses(n, p, gamma):
    if n < 5:
        raise HypothesisError(f"n >= 5 required, got n={n}")
    if not (1 < p < n / 2):
        raise HypothesisError(f"1 < p < n/2 required, got p={p}")
    lo, hi = 2 - n / p, n * (p - 1) / p
    if not (lo < gamma < hi):
        raise HypothesisError(f"2 - n/p < gamma < n(p-1)/p violated: need {lo} < gamma < {hi}")


def maximize_weighted_rellich_f(n, p, gamma) -> Maximizer:
    check_weighted_rellich_hypotheses(n, p, gamma)
    b = n / p - 2 + gamma
    c = n * (p - 1) / p - gamma
    a = b ** (p - 1) * c ** (p - 1)
    value = b**p * c**p
    gm = _grid_max(lambda x, y: weighted_rellich_f(x, y, n, p, gamma), a, b)
    return Maximizer(a, b, value, gm, _confirm(value, gm))


def numeric_maximize(f, x0, y0, m=201, zooms=40):
    """Brute-force grid over ``[x0/4, 4x0] x [y0/4, 4y0]`` refined by repeated local zooms.

    ``(x0, y0)`` only sets the search box; the maximizer is located numerically.
    Each zoom re-grids two cells around the current best point on a 21 x 21 grid.
    """
    xs = np.linspace(x0 / 4, 4 * x0, m)
    ys = np.linspace(y0 / 4, 4 * y0, m)
    hx, hy = xs[1] - xs[0], ys[1] - ys[0]
    best = (np.nan, np.nan, -np.inf)
    for _ in range(zooms + 1):
        X, Y = np.meshgrid(xs, ys)
        with np.errstate(all="ignore"):
            F = f(X, Y)
        F = np.where(np.isfinite(F), F, -np.inf)
        j, i = np.unravel_index(int(np.argmax(F)), F.shape)
        if F[j, i] >= best[2]:
            best = (float(xs[i]), float(ys[j]), float(F[j, i]))
        xs = np.linspace(best[0] - 2 * hx, best[0] + 2 * hx, 21)
        ys = np.linspace(best[1] - 2 * hy, best[1] + 2 * hy, 21)
        hx, hy = xs[1] - xs[0], ys[1] - ys[0]
    return best


# --- catalog ------------------------------------------------------------------


def _bessel_ratio(j):
    """``y(t) = j J_1(j t) / J_0(j t)`` with ``y' = j^2 + y^2 - y/t``."""

    def y(t):
        t = np.asarray(t, dtype=float)
        return j * bessel_j(1, j * t) / bessel_j(0, j * t)

    def y1(t):
        v = y(t)
        return j**2 + v**2 - v / np.asarray(t, dtype=float)

    return ParamFn(y, y1, None, "bessel_ratio")


def catalog(name: str, n: int, kappa: float = 1.0, p: float = 2.0, gamma: float = 0.0,
            a=None, b=None, C=None, optimal: bool = True) -> RiccatiSystem:
    """Assemble one of the named parameter families.

    With ``optimal=True`` the free constants ``a, b, C`` are set to their
    maximizers; explicit values override.
    """
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    if name == "clamped_constant":
        m = maximize_clamped_f(n, kappa, p) if optimal else None
        a = a if a is not None else m.a
        b = b if b is not None else m.b
        C = C if C is not None else m.value
        space = ModelSpace(n, kappa)
        return RiccatiSystem(ParamFn.constant((n - 1) * kappa, "L"), ParamFn.constant(C, "W"),
                             ParamFn.constant(1.0, "w"), ParamFn.constant(a, "G"),
                             ParamFn.constant(b, "H"), p, space, "ODI", name,
                             dict(n=n, kappa=kappa, p=p, a=a, b=b, C=C))
    if name == "buckling_constant":
        m = maximize_buckling_f(n, kappa) if optimal else None
        a = a if a is not None else m.a
        b = b if b is not None else m.b
        C = C if C is not None else m.C
        space = ModelSpace(n, kappa)
        return RiccatiSystem(ParamFn.constant((n - 1) * kappa, "L"), ParamFn.constant(C, "W"),
                             None, ParamFn.constant(a, "G"), ParamFn.constant(b, "H"),
                             2.0, space, "PDI", name, dict(n=n, kappa=kappa, a=a, b=b, C=C))
    if name == "weighted_rellich":
        m = maximize_weighted_rellich_f(n, p, gamma) if optimal else None
        if not optimal:
            check_weighted_rellich_hypotheses(n, p, gamma)
        a = a if a is not None else m.a
        b = b if b is not None else m.b
        C = C if C is not None else m.value
        return RiccatiSystem(ParamFn.power(n - 1, -1, "L"),
                             ParamFn.power(C, -(2 - gamma) * p, "W"),
                             ParamFn.power(1.0, gamma * p, "w"),
                             ParamFn.power(a, -(2 * p - 2), "G"),
                             ParamFn.power(b, -1, "H"), p, ModelSpace(n, 0.0), "ODI", name,
                             dict(n=n, p=p, gamma=gamma, a=a, b=b, C=C))
    if name == "rellich_bessel":
        if n < 5:
            raise HypothesisError(f"n >= 5 required, got n={n}")
        j = first_zero_j(0)
        c = n * (n - 4) / 4
        H = ParamFn.power((n - 4) / 2, -1, "H0") + _bessel_ratio(j)
        W = (ParamFn.power(rellich_bessel_constants(n)[0], -4, "W4")
             + ParamFn.power(rellich_bessel_constants(n)[1], -2, "W2"))
        return RiccatiSystem(ParamFn.power(n - 1, -1, "L"), W, ParamFn.constant(1.0, "w"),
                             ParamFn.power(c, -2, "G"), H, 2.0, ModelSpace(n, 0.0), "ODI",
                             name, dict(n=n, j01=j), (0.0, 1.0))
    if name == "rellich_hyperbolic":
        if n < 5:
            raise HypothesisError(f"n >= 5 required, got n={n}")
        if not kappa > 0:
            raise HypothesisError("kappa > 0 required")
        space = ModelSpace(n, kappa)
        k = kappa
        c0, c1, c2 = rellich_hyperbolic_constants(n, kappa)

        def csch2(t):
            e = np.exp(-2 * k * np.asarray(t, dtype=float))
            return 4 * e / (1 - e) ** 2

        def coth(t):
            return ct_kappa(t, k) / k

        L = ParamFn(lambda t: (n - 1) * k * coth(t),
                    lambda t: -(n - 1) * k**2 * csch2(t), None, "L")
        H = ParamFn(lambda t: (n - 1) * k * coth(t) / 2 - 1 / (2 * np.asarray(t)),
                    lambda t: -(n - 1) * k**2 * csch2(t) / 2 + 1 / (2 * np.asarray(t) ** 2),
                    None, "H")
        W = ParamFn(lambda t: c0 + c1 / np.asarray(t) ** 2 + c2 * csch2(t),
                    lambda t: -2 * c1 / np.asarray(t) ** 3 - 2 * c2 * k * coth(t) * csch2(t),
                    None, "W")
        return RiccatiSystem(L, W, ParamFn.constant(1.0, "w"),
                             ParamFn.constant((n - 1) ** 2 * kappa**2 / 4, "G"), H, 2.0, space,
                             "ODI", name, dict(n=n, kappa=kappa))
    # rellich_gradient
    if n < 8:
        raise HypothesisError(f"n >= 8 required, got n={n}")
    return RiccatiSystem(ParamFn.power(n - 1, -1, "L"), ParamFn.power(n * (n - 8) / 4, -2, "W"),
                         None, ParamFn.power(n * (n - 4) / 4, -2, "G"),
                         ParamFn.power((n - 4) / 2, -1, "H"), 2.0, ModelSpace(n, 0.0), "PDI",
                         name, dict(n=n))


def rellich_bessel_constants(n):
    """Coefficients of ``int u^2/rho^4`` and ``int u^2/rho^2`` on the unit ball."""
    j = first_zero_j(0)
    return n**2 * (n - 4) ** 2 / 16, n * (n - 4) * j**2 / 2


def rellich_hyperbolic_constants(n, kappa):
    """Coefficients of ``int u^2``, ``int u^2/rho^2`` and ``int u^2/sinh^2(kappa rho)``."""
    return ((n - 1) ** 4 * kappa**4 / 16,
            (n - 1) ** 2 * kappa**2 / 8,
            (n - 1) ** 3 * (n - 3) * kappa**4 / 8)

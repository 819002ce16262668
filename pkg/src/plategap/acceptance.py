"""The ten acceptance recipes, shared by the test suite and ``plategap validate``.

Each recipe returns a :class:`CriterionResult` holding named boolean checks,
human-readable detail lines and the wall time against its budget.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from . import riccati
from .eigensolve import RadialEigenProblem, dense_eigenvalues, gap_convergence_study, solve
from .modelspace import ModelSpace, RadialProfile
from .quadrature import green_identity_residual
from .rellich import hyperbolic_u_delta_check, rellich_sweep
from .report import SweepReport
from .sharpness import ROUNDOFF_SLACK, sharpness_sweep
from .specialfn import bessel_i, bessel_j, cross_product_zero, first_zero_j

EIGEN_MESH = 512


@dataclass
class CriterionResult:
    number: int
    title: str
    budget: float
    checks: dict = field(default_factory=dict)
    details: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def within_budget(self) -> bool:
        return self.seconds < self.budget

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(self.checks.values()) and self.within_budget

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"criterion {self.number:2d} [{status}] {self.title} ({self.seconds:.2f}s / {self.budget:g}s)"
        bad = [k for k, ok in self.checks.items() if not ok]
        if bad:
            out += " failing: " + ", ".join(bad)
        return out


def _timed(number, title, budget):
    def wrap(fn):
        def run() -> CriterionResult:
            res = CriterionResult(number, title, budget)
            t0 = time.perf_counter()
            fn(res)
            res.seconds = time.perf_counter() - t0
            return res
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        run.number = number
        return run
    return wrap


def _in_band(q, limit, width):
    return q >= limit * (1 - ROUNDOFF_SLACK) and q <= limit * (1 + width)


@_timed(1, "ODI saturation of the clamped constant family", 27.0)
def criterion_1(res: CriterionResult):
    """27 triples at 1 s each; the per-triple time is checked separately."""
    slowest = 0.0
    for n, kappa, p in itertools.product((2, 3, 5), (0.5, 1.0, 2.0), (1.5, 2.0, 3.0)):
        t0 = time.perf_counter()
        sys = riccati.catalog("clamped_constant", n, kappa, p)
        t = np.geomspace(1e-3, 1e3, riccati.GRID_SIZE)
        worst = float(np.max(np.abs(riccati.odi_residual_clamped(sys, t))))
        rep = riccati.verify_system(sys)
        bumped = riccati.catalog("clamped_constant", n, kappa, p, C=sys.params["C"] * (1 + 1e-3))
        rejected = not riccati.verify_system(bumped).passed
        slowest = max(slowest, time.perf_counter() - t0)
        key = f"n={n},kappa={kappa:g},p={p:g}"
        res.checks[f"{key} residual"] = worst < 1e-10 and rep.passed
        res.checks[f"{key} perturbed C rejected"] = rejected
        res.details.append(f"{key}: max|residual|={worst:.2e} perturbed_rejected={rejected}")
    res.checks["under 1 s per triple"] = slowest < 1.0
    res.details.append(f"slowest triple {slowest:.3f}s")


@_timed(2, "PDI saturation and Rellich families", 5.0)
def criterion_2(res: CriterionResult):
    for n, kappa in ((2, 1.0), (3, 1.0), (5, 2.0)):
        sys = riccati.catalog("buckling_constant", n, kappa)
        t = np.geomspace(1e-3, 1e3, riccati.GRID_SIZE)
        worst = float(np.max(np.abs(riccati.pdi_residual_buckling(sys, t))))
        res.checks[f"buckling n={n} kappa={kappa:g}"] = worst < 1e-10
        res.details.append(f"buckling_constant n={n} kappa={kappa:g}: max|residual|={worst:.2e}")
    theorems = {"weighted_rellich": "T5.1", "rellich_bessel": "T5.4",
                "rellich_hyperbolic": "T5.5", "rellich_gradient": "T5.6"}
    cases = [("weighted_rellich", dict(n=8, p=2.0, gamma=1.0)),
             ("weighted_rellich", dict(n=7, p=3.0, gamma=0.5)),
             ("rellich_bessel", dict(n=5)), ("rellich_bessel", dict(n=8)),
             ("rellich_hyperbolic", dict(n=5, kappa=1.0)),
             ("rellich_hyperbolic", dict(n=7, kappa=2.5)),
             ("rellich_gradient", dict(n=8)), ("rellich_gradient", dict(n=11))]
    for name, kw in cases:
        rep = riccati.verify_system(riccati.catalog(name, **kw))
        key = f"{name} " + ",".join(f"{k}={v:g}" for k, v in kw.items())
        res.checks[key] = rep.passed and rep.positive
        res.reports.append(rep.to_sweep(theorems[name]))
        res.details.append(f"{key}: min relative residual {rep.min_relative:.2e}")


@_timed(3, "closed-form versus numeric maximizers", 10.0)
def criterion_3(res: CriterionResult):
    rng = np.random.default_rng(20240917)

    def rel(a, b):
        return abs(a - b) / max(abs(b), 1e-300)

    worst = {"clamped": 0.0, "buckling": 0.0, "weighted_rellich": 0.0}
    for _ in range(10):
        n, kappa, p = int(rng.integers(2, 9)), float(rng.uniform(0.3, 3.0)), float(rng.uniform(1.2, 4.0))
        m = riccati.maximize_clamped_f(n, kappa, p)
        num = riccati.numeric_maximize(lambda a, b: riccati.clamped_f(a, b, n, kappa, p), m.a, m.b)
        worst["clamped"] = max(worst["clamped"], rel(m.value, num[2]))

        n, kappa = int(rng.integers(2, 9)), float(rng.uniform(0.3, 3.0))
        mb = riccati.maximize_buckling_f(n, kappa)
        num = riccati.numeric_maximize(lambda b, C: riccati.buckling_f(b, C, n, kappa), mb.b, mb.C)
        worst["buckling"] = max(worst["buckling"], rel(mb.gap, num[2]))

        n = int(rng.integers(5, 13))
        p = float(rng.uniform(1.2, n / 2 - 0.1))
        lo, hi = 2 - n / p, n * (p - 1) / p
        gamma = float(rng.uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo)))
        mw = riccati.maximize_weighted_rellich_f(n, p, gamma)
        num = riccati.numeric_maximize(lambda a, b: riccati.weighted_rellich_f(a, b, n, p, gamma),
                                       mw.a, mw.b)
        worst["weighted_rellich"] = max(worst["weighted_rellich"], rel(mw.value, num[2]))
    for k, v in worst.items():
        res.checks[k] = v < 1e-6
        res.details.append(f"{k}: worst relative difference {v:.2e}")


def _sharpness_final(res, rep: SweepReport, width, key, envelope=False):
    last = rep.rows[-1]
    ok = _in_band(last.computed, last.reference, width)
    res.checks[f"{key} final quotient within {width:.0%} above"] = ok
    if envelope:
        res.checks[f"{key} envelope brackets every row"] = all(
            r.extra["within_envelope"] for r in rep.rows)
    res.reports.append(rep)
    res.details.append(f"{key}: delta={last.parameter:g} quotient={last.computed!r} "
                       f"limit={last.reference!r} rel_gap={last.residual:.3e}")


@_timed(4, "clamped sharpness", 30.0)
def criterion_4(res: CriterionResult):
    for n, p in itertools.product((2, 3, 5), (2.0, 3.0)):
        rep = sharpness_sweep("clamped", n, 1.0, p)
        _sharpness_final(res, rep, 0.02, f"n={n},p={p:g}", envelope=True)


@_timed(5, "buckling sharpness", 10.0)
def criterion_5(res: CriterionResult):
    for n in (2, 3):
        rep = sharpness_sweep("buckling", n, 1.0, 2.0)
        _sharpness_final(res, rep, 0.02, f"n={n}", envelope=True)


@_timed(6, "higher-order clamped sharpness", 60.0)
def criterion_6(res: CriterionResult):
    for gradient in (False, True):
        rep = sharpness_sweep("higher_order_clamped", 3, 1.0, 2.0, k=2, gradient=gradient)
        _sharpness_final(res, rep, 0.05, "gradient" if gradient else "value")


@_timed(7, "Euclidean eigenvalue baselines", 30.0)
def criterion_7(res: CriterionResult):
    space = ModelSpace(2, 0.0)
    refs = {"membrane": (first_zero_j(0) ** 2, 1e-6, 2), "clamped": (cross_product_zero(0) ** 4, 1e-5, 4)}
    for kind, (ref, tol, power) in refs.items():
        lam = solve(RadialEigenProblem(kind, space, 1.0, EIGEN_MESH), 1, extrapolate=False).eigenvalues[0]
        err = abs(lam / ref - 1)
        res.checks[f"{kind} unit disk"] = err < tol
        res.details.append(f"{kind}: lambda_1={lam!r} reference={ref!r} rel_err={err:.2e}")
        for r in (0.5, 2.0):
            lr = solve(RadialEigenProblem(kind, space, r, EIGEN_MESH), 1, extrapolate=False).eigenvalues[0]
            dev = abs(lr * r**power / lam - 1)
            res.checks[f"{kind} scaling r={r:g}"] = dev < 1e-6
            res.details.append(f"{kind} r={r:g}: scaling deviation {dev:.2e}")


@_timed(8, "hyperbolic spectral gap and large-ball limit", 120.0)
def criterion_8(res: CriterionResult):
    space = ModelSpace(2, 1.0)
    R = (2.0, 5.0, 10.0, 20.0)
    mem = gap_convergence_study("membrane", space, R, mesh=EIGEN_MESH)
    cla = gap_convergence_study("clamped", space, R, mesh=EIGEN_MESH)
    for name, rep in (("membrane", mem), ("clamped", cla)):
        res.checks[f"{name} above gap on every ball"] = all(r.passed for r in rep.rows)
        res.checks[f"{name} gaps strictly decreasing"] = rep.checks["gap_strictly_decreasing"]
        res.reports.append(rep)
        res.details.append(f"{name}: " + ", ".join(f"R={r.parameter:g}: {r.computed:.6f}" for r in rep.rows))
    res.checks["membrane gap at R=20 below 0.05"] = mem.rows[-1].residual < 0.05
    ratio = cla.rows[-1].residual / cla.rows[0].computed
    res.checks["clamped relative gap at R=20 below 0.1"] = ratio < 0.1
    res.details.append(f"clamped (lambda(B_20) - 1/16)/lambda(B_2) = {ratio:.4f} (solver-derived threshold)")


RELLICH_CASES = (
    ("weighted", dict(n=8, p=2.0, gamma=1.0)),
    ("weighted", dict(n=7, p=3.0, gamma=0.5)),
    ("weighted", dict(n=5, p=2.0, gamma=0.0)),
    ("higher_order_1", dict(n=9, p=2.0, k=2)),
    ("higher_order_2", dict(n=11, p=2.0, k=2)),
    ("bessel", dict(n=6)),
    ("hyperbolic", dict(n=5, kappa=1.0)),
    ("gradient", dict(n=9)),
    ("hardy", dict(n=5, p=2.0)),
)


@_timed(9, "Rellich and Hardy quotients", 30.0)
def criterion_9(res: CriterionResult):
    for i, (mode, kw) in enumerate(RELLICH_CASES):
        rep = rellich_sweep(mode, samples=10, seed=100 + i, **kw)
        key = f"{rep.theorem} {mode} " + ",".join(f"{k}={v:g}" for k, v in kw.items())
        res.checks[key] = rep.passed
        res.reports.append(rep)
        res.details.append(f"{key}: smallest quotient/constant - 1 = {min(r.residual for r in rep.rows):.3e}")
    for delta in (16.0, 64.0):
        chk = hyperbolic_u_delta_check(5, 1.0, delta)
        res.checks[f"T5.5 u_delta delta={delta:g}"] = chk.passed
        res.details.append(f"T5.5 u_delta delta={delta:g}: lhs={chk.terms['lhs']!r} "
                           f"rhs={chk.terms['rhs']!r} quotient={chk.quotient!r}")


def _bessel_recurrence_error():
    x = np.linspace(0.5, 30.0, 400)
    worst = 0.0
    for mu in (1.0, 1.5, 2.0, 3.0, 4.5, 7.0):
        lhs = bessel_j(mu - 1, x) + bessel_j(mu + 1, x)
        worst = max(worst, float(np.max(np.abs(lhs - 2 * mu / x * bessel_j(mu, x)))))
        xi = x[x <= 15]
        lhs = bessel_i(mu - 1, xi) - bessel_i(mu + 1, xi)
        rhs = 2 * mu / xi * bessel_i(mu, xi)
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / np.abs(rhs))))
    return worst


@_timed(10, "pipeline self-tests", 10.0)
def criterion_10(res: CriterionResult):
    u = RadialProfile.bump(4, (1.0, 0.5), 1.5)
    v = RadialProfile.bump(5, (2.0, -0.3), 1.2)
    e = RadialProfile.exponential(3.0)
    worst = 0.0
    for n, kappa in ((2, 0.0), (5, 0.0), (3, 1.0), (5, 0.5)):
        space = ModelSpace(n, kappa)
        worst = max(worst, green_identity_residual(u, v, space), green_identity_residual(u, e, space))
    res.checks["Green identity"] = worst < 1e-8
    res.details.append(f"Green identity worst residual {worst:.2e}")
    rec = _bessel_recurrence_error()
    res.checks["Bessel recurrences"] = rec < 1e-7
    res.details.append(f"Bessel recurrence worst error {rec:.2e}")
    worst = 0.0
    for kind in ("membrane", "clamped", "buckling"):
        for space, R in ((ModelSpace(2, 0.0), 1.0), (ModelSpace(3, 1.0), 5.0)):
            prob = RadialEigenProblem(kind, space, R, 64)
            it = solve(prob, 5, extrapolate=False).eigenvalues
            worst = max(worst, float(np.max(np.abs(dense_eigenvalues(prob, 5) / it - 1))))
    res.checks["dense versus iterative eigenvalues"] = worst < 1e-9
    res.details.append(f"dense/iterative worst relative difference {worst:.2e}")


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10)


def run_all(selected=None) -> list[CriterionResult]:
    return [c() for c in CRITERIA if selected is None or c.number in selected]


def summary_report(results) -> SweepReport:
    rep = SweepReport("T1.1", "acceptance suite", {},
                      columns=("criterion", "seconds", "budget", "failing_checks"))
    for r in results:
        bad = [k for k, ok in r.checks.items() if not ok]
        rep.add(r.number, r.seconds, r.budget, len(bad), r.passed, title=r.title,
                failing="; ".join(bad))
    rep.notes.append("each criterion also carries its own theorem-tagged reports")
    return rep

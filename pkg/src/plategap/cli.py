"""Command-line recipes: ``plategap <command> [flags]``.

Parameters come from three layers, highest first: flags, a flat ``key = value``
config file given with ``--config``, and per-command defaults.  Exit status is
0 when every assertion of the recipe passes, 1 when one fails (the failing rows
are printed to stderr) and 2 when the configuration is invalid.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import acceptance, riccati
from .eigensolve import KINDS as EIGEN_KINDS
from .eigensolve import RadialEigenProblem, gap_convergence_study, solve
from .errors import PlateGapError
from .modelspace import ModelSpace
from .rellich import MODES, rellich_sweep
from .report import SweepReport, bundle_csv, bundle_dict, dumps_json, write_atomic
from .sharpness import DEFAULT_DELTAS, ROUNDOFF_SLACK, sharpness_sweep
from .sharpness import KINDS as SHARP_KINDS
from .specialfn import cross_product_zero, first_zero_j

COMMANDS = ("odi-check", "sharpness", "eigen", "rellich", "validate", "report")


class ConfigError(ValueError):
    pass


def _bool(s):
    if isinstance(s, bool):
        return s
    v = str(s).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _floats(s):
    if isinstance(s, (list, tuple)):
        return [float(x) for x in s]
    return [float(x) for x in str(s).replace(" ", "").split(",") if x]


def _ints(s):
    return [int(x) for x in _floats(s)]


PARAMS = {
    "n": int, "kappa": float, "p": float, "gamma": float, "k": int,
    "R": _floats, "deltas": _floats, "family": str, "mesh": int, "tol": float,
    "kind": str, "mode": str, "optimal": _bool, "gradient": _bool,
    "samples": int, "seed": int, "m": int, "a": float, "b": float, "C": float,
    "criteria": _ints, "out": str, "format": str, "no_timestamp": _bool,
}

_FAMILY_THEOREM = {"clamped_constant": "T3.1", "buckling_constant": "T3.2",
                   "weighted_rellich": "T5.1", "rellich_bessel": "T5.4",
                   "rellich_hyperbolic": "T5.5", "rellich_gradient": "T5.6"}


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for i, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else (":" if ":" in line else None)
        if sep is None:
            raise ConfigError(f"{path}:{i}: expected key = value")
        key, val = (s.strip() for s in line.split(sep, 1))
        out[key.replace("-", "_")] = val
    return out


def merge(flags: dict, config: dict) -> dict:
    """Typed union of config and flags, flags winning; unknown keys raise."""
    merged = {}
    for source in (config, flags):
        for key, val in source.items():
            if val is None:
                continue
            if key not in PARAMS:
                raise ConfigError(f"unknown parameter {key!r}")
            try:
                merged[key] = PARAMS[key](val)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key}: {val!r} ({exc})") from exc
    fmt = merged.get("format")
    if fmt is not None and fmt not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    return merged


def _choice(cfg, key, choices, default):
    v = cfg.get(key, default)
    if v not in choices:
        raise ConfigError(f"{key} must be one of {', '.join(choices)}, got {v!r}")
    return v


# --- recipes ------------------------------------------------------------------


def run_odi_check(cfg):
    family = _choice(cfg, "family", riccati.FAMILIES, "clamped_constant")
    kw = {k: cfg[k] for k in ("kappa", "p", "gamma", "a", "b", "C") if k in cfg}
    sys_ = riccati.catalog(family, cfg.get("n", 3), optimal=cfg.get("optimal", True), **kw)
    # the residual floor is signed: rows pass when min relative residual >= -tol
    tol = -abs(cfg["tol"]) if "tol" in cfg else riccati.ROUNDOFF_SLACK
    rep = riccati.verify_system(sys_, tol=tol).to_sweep(
        _FAMILY_THEOREM[family])
    rep.params.update(sys_.params)
    return [rep]


def run_sharpness(cfg):
    kind = _choice(cfg, "kind", SHARP_KINDS, "clamped")
    rep = sharpness_sweep(kind, cfg.get("n", 2), cfg.get("kappa", 1.0), cfg.get("p", 2.0),
                          cfg.get("deltas", DEFAULT_DELTAS), cfg.get("k", 1),
                          cfg.get("gradient", False))
    tol = cfg.get("tol", 0.02 if kind in ("clamped", "buckling") else 0.05)
    rep.params["tol"] = tol
    gap = rep.rows[-1].residual
    rep.checks["final_rel_gap_below_tol"] = -ROUNDOFF_SLACK <= gap < tol
    return [rep]


def _euclidean_reference(kind, n, R):
    nu = n / 2 - 1
    if kind == "membrane":
        return first_zero_j(nu) ** 2 / R**2
    if kind == "clamped":
        return cross_product_zero(nu) ** 4 / R**4
    return first_zero_j(nu + 1) ** 2 / R**2


def run_eigen(cfg):
    kind = _choice(cfg, "kind", EIGEN_KINDS, "membrane")
    n, kappa = cfg.get("n", 2), cfg.get("kappa", 0.0)
    space = ModelSpace(n, kappa)
    R_list = cfg.get("R", [1.0])
    mesh, m = cfg.get("mesh", 256), cfg.get("m", 1)
    if kappa > 0:
        return [gap_convergence_study(kind, space, R_list, m, mesh)]
    tol = cfg.get("tol", 1e-5 if kind == "clamped" else 1e-6)
    theorem = {"membrane": "T2.1", "clamped": "T1.1", "buckling": "T1.2"}[kind]
    rep = SweepReport(theorem, f"{kind} Euclidean ball baseline",
                      dict(kind=kind, n=n, kappa=kappa, mesh=mesh, tol=tol),
                      columns=("R", "lambda_1", "reference", "rel_err"))
    for R in R_list:
        res = solve(RadialEigenProblem(kind, space, R, mesh), m)
        lam = float(res.eigenvalues[0])
        ref = _euclidean_reference(kind, n, R)
        err = abs(lam / ref - 1)
        rep.add(R, lam, ref, err, err < tol, residual_norm=float(res.residuals[0]),
                extrapolated=float(res.extrapolated[0]), observed_order=res.observed_order)
    return [rep]


def run_rellich(cfg):
    mode = _choice(cfg, "mode", MODES, "weighted")
    return [rellich_sweep(mode, cfg.get("n", 5), cfg.get("p", 2.0), cfg.get("gamma", 0.0),
                          cfg.get("kappa", 0.0), cfg.get("k", 1), cfg.get("samples", 10),
                          cfg.get("seed", 0))]


def _acceptance(cfg, full):
    results = acceptance.run_all(cfg.get("criteria"))
    for r in results:
        print(r.line())
    summary = acceptance.summary_report(results)
    if not full:
        return [summary]
    return [summary] + [rep for r in results for rep in r.reports]


RECIPES = {
    "odi-check": run_odi_check,
    "sharpness": run_sharpness,
    "eigen": run_eigen,
    "rellich": run_rellich,
    "validate": lambda cfg: _acceptance(cfg, False),
    "report": lambda cfg: _acceptance(cfg, True),
}


# --- output -------------------------------------------------------------------


def render(reports, fmt, timestamp=True) -> str:
    if len(reports) == 1:
        rep = reports[0]
        return rep.to_csv() if fmt == "csv" else rep.to_json(timestamp)
    return bundle_csv(reports) if fmt == "csv" else dumps_json(bundle_dict(reports, timestamp))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="plategap", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="flat key = value file; flags override its entries")
    for key in ("n", "k", "mesh", "samples", "seed", "m"):
        ap.add_argument(f"--{key}", type=str)
    for key in ("kappa", "p", "gamma", "tol", "a", "b", "C"):
        ap.add_argument(f"--{key}", type=str)
    ap.add_argument("--R", help="comma-separated radii")
    ap.add_argument("--deltas", help="comma-separated truncation lengths")
    ap.add_argument("--criteria", help="comma-separated acceptance criteria numbers")
    ap.add_argument("--family", choices=riccati.FAMILIES)
    ap.add_argument("--kind")
    ap.add_argument("--mode", choices=MODES)
    ap.add_argument("--optimal", action="store_const", const=True,
                    help="use the maximizing constants (the default)")
    ap.add_argument("--gradient", action="store_const", const=True)
    ap.add_argument("--out", help="report path; stdout when omitted")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--no-timestamp", dest="no_timestamp", action="store_const", const=True)
    return ap


def run(command: str, params: dict, config_path=None, stdout=None, stderr=None) -> int:
    """Run one recipe with ``params`` layered over the config file; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if command not in RECIPES:
        print(f"invalid configuration: unknown command {command!r}", file=stderr)
        return 2
    try:
        cfg = merge(params, read_config(config_path) if config_path else {})
        reports = RECIPES[command](cfg)
    except (ValueError, PlateGapError) as exc:
        if not isinstance(exc, ValueError):
            print(f"error: {exc}", file=stderr)
            return 1
        print(f"invalid configuration: {exc}", file=stderr)
        return 2
    out = cfg.get("out")
    fmt = cfg.get("format") or ("csv" if out and out.endswith(".csv") else "json")
    text = render(reports, fmt, not cfg.get("no_timestamp", False))
    if out:
        write_atomic(out, text)
    else:
        stdout.write(text)
    for rep in reports:
        print(rep.summary(), file=stderr)
    failures = [f for rep in reports for f in rep.failures()]
    for f in failures:
        print(f"FAILED {f}", file=stderr)
    return 1 if failures else 0


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    command, config_path = args.pop("command"), args.pop("config")
    return run(command, args, config_path)


if __name__ == "__main__":
    sys.exit(main())

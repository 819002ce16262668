"""Tabular verification reports with CSV and JSON emission."""

from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

THEOREM_IDS = (
    "T1.1", "T1.2", "T2.1", "T3.1", "T3.2", "T4.3", "T4.4",
    "T5.1", "R5.2", "T5.3", "T5.4", "T5.5", "T5.6", "H5.2",
)


@dataclass
class SweepRow:
    parameter: Any
    computed: float
    reference: float
    residual: float
    passed: bool = True
    extra: dict = field(default_factory=dict)


@dataclass
class SweepReport:
    """A tagged table of ``(parameter, computed, reference, residual)`` rows.

    ``columns`` renames the four leading fields on output, e.g. a sharpness
    sweep writes them as ``delta, quotient, limit, rel_gap``.  ``checks``
    holds table-level assertions (monotonicity and the like) that are not
    attached to a single row.
    """

    theorem: str
    title: str
    params: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    columns: tuple = ("parameter", "computed", "reference", "residual")
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def add(self, parameter, computed, reference, residual, passed=True, **extra):
        self.rows.append(
            SweepRow(parameter, computed, reference, residual, bool(passed), extra)
        )

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows) and all(self.checks.values())

    def failures(self) -> list[str]:
        out = []
        for i, r in enumerate(self.rows):
            if not r.passed:
                out.append(
                    f"{self.theorem} row {i} ({self.columns[0]}={r.parameter}): "
                    f"{self.columns[1]}={r.computed!r} {self.columns[2]}={r.reference!r}"
                )
        out += [f"{self.theorem} check {k}" for k, ok in self.checks.items() if not ok]
        return out

    def records(self) -> list[dict]:
        recs = []
        for r in self.rows:
            rec = {"theorem": self.theorem}
            rec.update(zip(self.columns, (r.parameter, r.computed, r.reference, r.residual)))
            rec["pass"] = r.passed
            rec.update(r.extra)
            recs.append(rec)
        return recs

    def to_dict(self, timestamp: bool = True) -> dict:
        d = {
            "theorem": self.theorem,
            "title": self.title,
            "params": _clean(self.params),
            "columns": list(self.columns),
            "rows": _clean(self.records()),
            "checks": _clean(self.checks),
            "notes": list(self.notes),
            "passed": self.passed,
        }
        if timestamp:
            d["generated_at"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        return d

    def to_json(self, timestamp: bool = True) -> str:
        return dumps_json(self.to_dict(timestamp))

    def to_csv(self) -> str:
        recs = self.records()
        header = ["theorem", *self.columns, "pass"]
        for rec in recs:
            header += [k for k in rec if k not in header]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\r\n")
        writer.writeheader()
        for rec in recs:
            writer.writerow({k: _fmt(v) for k, v in rec.items()})
        return buf.getvalue()

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.theorem} {self.title} ({len(self.rows)} rows)"


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _clean(obj):
    # JSON has no NaN/inf; encode them as strings so output stays valid.
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path, text: str) -> Path:
    """Write ``text`` to ``path`` through a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def bundle_dict(reports, timestamp: bool = True) -> dict:
    d = {"reports": [r.to_dict(timestamp=False) for r in reports],
         "passed": all(r.passed for r in reports)}
    if timestamp:
        d["generated_at"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return d


def bundle_csv(reports) -> str:
    """Several reports in one table using the generic column names."""
    header = ["theorem", "title", "parameter", "computed", "reference", "residual", "pass"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for rep in reports:
        for r in rep.rows:
            writer.writerow([rep.theorem, rep.title, *map(_fmt, (r.parameter, r.computed, r.reference,
                                                                 r.residual)), r.passed])
    return buf.getvalue()

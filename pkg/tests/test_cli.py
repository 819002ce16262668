from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from plategap import cli
from plategap.specialfn import first_zero_j


def _run(*argv):
    return cli.main(list(argv))


def test_odi_check_example(tmp_path, capsys):
    out = tmp_path / "odi.json"
    assert _run("odi-check", "--family", "clamped_constant", "--n", "3", "--kappa", "1", "--p", "2",
                "--optimal", "--out", str(out), "--no-timestamp") == 0
    doc = json.loads(out.read_text())
    assert doc["theorem"] == "T3.1"
    assert doc["rows"][0]["min_residual"] == 0.0


def test_sharpness_example_csv(tmp_path):
    out = tmp_path / "s.csv"
    assert _run("sharpness", "--kind", "clamped", "--n", "2", "--kappa", "1", "--p", "2",
                "--deltas", "8,32,128,500", "--out", str(out)) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert [float(r["delta"]) for r in rows] == [8, 32, 128, 500]
    assert float(rows[-1]["rel_gap"]) < 0.02
    assert all(r["theorem"] == "T1.1" for r in rows)


def test_eigen_example(tmp_path):
    out = tmp_path / "e.json"
    assert _run("eigen", "--kind", "membrane", "--n", "2", "--kappa", "0", "--R", "1", "--mesh", "256",
                "--out", str(out)) == 0
    row = json.loads(out.read_text())["rows"][0]
    assert abs(row["lambda_1"] / first_zero_j(0) ** 2 - 1) < 1e-6


def test_failing_assertion_exits_1_and_names_row(capsys):
    assert _run("odi-check", "--family", "clamped_constant", "--n", "3", "--kappa", "1", "--C", "1.001",
                "--format", "csv") == 1
    err = capsys.readouterr().err
    assert "FAILED T3.1 row 0" in err


def test_invalid_config_exits_2(tmp_path, capsys):
    assert _run("rellich", "--mode", "gradient", "--n", "6") == 2
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("n = 3\nbogus = 1\n")
    assert _run("sharpness", "--config", str(cfg)) == 2
    assert "unknown parameter" in capsys.readouterr().err
    cfg.write_text("n = three\n")
    assert _run("sharpness", "--config", str(cfg)) == 2
    cfg.write_text("just words\n")
    assert _run("sharpness", "--config", str(cfg)) == 2
    assert _run("sharpness", "--kind", "plate") == 2
    assert _run("sharpness", "--config", str(tmp_path / "missing.cfg")) == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        _run("sharpness", "--bogus", "1")
    assert exc.value.code == 2


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep settings\nkind = clamped\nn = 3\np = 2\ndeltas = 8, 32\nno-timestamp = true\n")
    out = tmp_path / "a.json"
    assert _run("sharpness", "--config", str(cfg), "--n", "2", "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["params"]["n"] == 2
    assert [r["delta"] for r in doc["rows"]] == [8.0, 32.0]
    assert "generated_at" not in doc
    merged = cli.merge({"n": "5", "kappa": None}, {"n": "3", "kappa": "2"})
    assert merged == {"n": 5, "kappa": 2.0}


def test_json_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert _run("rellich", "--mode", "hardy", "--n", "5", "--samples", "3", "--no-timestamp",
                    "--out", str(path)) == 0
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text(encoding="utf-8")
    doc = json.loads(text)
    assert list(doc) == sorted(doc)
    assert doc["theorem"] == "H5.2"


def test_timestamp_present_by_default(tmp_path):
    out = tmp_path / "t.json"
    _run("sharpness", "--deltas", "8,32", "--out", str(out))
    assert "generated_at" in json.loads(out.read_text())


def test_atomic_write_leaves_no_temporaries(tmp_path):
    out = tmp_path / "nested" / "r.csv"
    assert _run("eigen", "--kind", "clamped", "--n", "2", "--R", "1,2", "--out", str(out)) == 0
    assert [p.name for p in out.parent.iterdir()] == ["r.csv"]


def test_hyperbolic_eigen_uses_gap_study(capsys):
    assert _run("eigen", "--kind", "buckling", "--n", "3", "--kappa", "1", "--R", "2,5",
                "--mesh", "128", "--format", "json", "--no-timestamp") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["theorem"] == "T1.2"
    assert all(r["lambda_1"] > 1.0 for r in doc["rows"])


def test_validate_selected_criteria(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert _run("validate", "--criteria", "3,10", "--out", str(out), "--no-timestamp") == 0
    printed = capsys.readouterr().out
    assert "criterion  3 [PASS]" in printed and "criterion 10 [PASS]" in printed
    assert len(json.loads(out.read_text())["rows"]) == 2


def test_report_bundles_every_theorem(tmp_path):
    out = tmp_path / "all.csv"
    assert _run("report", "--criteria", "2", "--out", str(out)) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert {"T5.1", "T5.4", "T5.5", "T5.6"} <= {r["theorem"] for r in rows}


def test_run_rejects_unknown_command(capsys):
    assert cli.run("fly", {}) == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "plategap.cli", "sharpness", "--deltas", "8,32",
                           "--format", "csv"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("theorem,delta,quotient,limit,rel_gap,pass")

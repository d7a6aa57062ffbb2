import csv
import json
import subprocess
import sys

import pytest

from cyclelab.cli import main
from cyclelab.estimator import CSV_COLUMNS


def run(*args, env=None):
    return subprocess.run([sys.executable, "-m", "cyclelab.cli", *args],
                          capture_output=True, text=True, env=env)


def test_estimate_outputs_and_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["estimate", "--n", "4000", "--c", "5", "--trials", "3", "--seed", "4"]
    assert main(args + ["--out", str(a), "--threads", "1"]) == 0
    assert main(args + ["--out", str(b), "--threads", "2"]) == 0
    assert (a / "records.csv").read_bytes() == (b / "records.csv").read_bytes()
    rows = list(csv.DictReader(open(a / "records.csv")))
    assert tuple(rows[0]) == CSV_COLUMNS and len(rows) == 3
    assert all(r["ms"] == "" for r in rows)
    lines = (a / "records.jsonl").read_text().splitlines()
    assert len(lines) == 3 and json.loads(lines[0])["stream"] == 0
    manifest = json.loads((a / "manifest.json").read_text())
    assert manifest["command"] == "estimate" and manifest["master_seed"] == 4
    assert len(manifest["source_sha256"]) == 64
    summary = json.loads((a / "summary.json").read_text())
    assert summary["trials"] == 3


def test_timing_flag_fills_ms(tmp_path):
    assert main(["estimate", "--n", "500", "--c", "3", "--out", str(tmp_path), "--timing"]) == 0
    row = next(csv.DictReader(open(tmp_path / "records.csv")))
    assert float(row["ms"]) >= 0


def test_seed_environment_override(tmp_path, monkeypatch):
    monkeypatch.setenv("CYCLELAB_SEED", "77")
    assert main(["estimate", "--n", "500", "--c", "3", "--seed", "1", "--out", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "manifest.json").read_text())["master_seed"] == 77
    row = next(csv.DictReader(open(tmp_path / "records.csv")))
    assert row["seed"] == "77"


def test_replay_reproduces(tmp_path):
    first, again = tmp_path / "first", tmp_path / "again"
    assert main(["estimate", "--n", "800", "--c", "4", "--seed", "3", "--out", str(first)]) == 0
    assert main(["replay", str(first / "manifest.json"), "--out", str(again)]) == 0
    assert (first / "records.csv").read_bytes() == (again / "records.csv").read_bytes()


@pytest.mark.parametrize("c", ["0.5", "1"])
def test_subcritical_estimate_is_usage_error(tmp_path, c):
    res = run("estimate", "--n", "100", "--c", c, "--out", str(tmp_path))
    assert res.returncode == 2 and "c must be > 1" in res.stderr


def test_usage_errors():
    assert run("estimate", "--c", "3").returncode == 2
    assert run("bogus").returncode == 2
    assert run("estimate", "--n", "0", "--c", "3", "--out", "x").returncode == 2


def test_analytic_table(capsys):
    assert main(["analytic", "--c", "5,10,20"]) == 0
    rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
    assert [r["status"] for r in rows] == ["ok"] * 3
    assert float(rows[0]["core_vertex_fraction"]) == pytest.approx(0.95838, abs=1e-5)
    assert float(rows[1]["corollary1"]) == pytest.approx(0.99950039, abs=1e-8)
    assert rows[0]["k1"] == "n/a"


def test_analytic_rejects_row_and_k1(capsys):
    assert main(["analytic", "--c", "1,40", "--eps", "0.01", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[0]["status"].startswith("rejected") and rows[0]["x"] == "n/a"
    assert rows[1]["k1"] == 6


def test_fseries_json(capsys):
    args = ["fseries", "--c", "40", "--eps", "0.3", "--cap", "6", "--N", "10000", "--M", "15000"]
    assert main(args + ["--variant", "f2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert {"value", "variant", "trees_evaluated", "truncated"} <= set(out)
    assert out["variant"] == "f2" and out["value"] == out["value_f2"] and out["truncated"]


def test_fseries_undefined_radius(capsys):
    assert main(["fseries", "--c", "10", "--eps", "0.1", "--cap", "5"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == "n/a" and out["trees_evaluated"] == 0


def test_validate_subset(capsys):
    assert main(["validate", "--only", "graph", "analytic", "--max-tree", "5"]) == 0
    out = capsys.readouterr().out
    assert "[PASS] graph/two_core_fixpoint" in out and "0 hard failures" in out


def test_runtime_failure_exit_code(tmp_path):
    bad = tmp_path / "manifest.json"
    bad.write_text("{}")
    assert main(["replay", str(bad)]) == 1


def test_validate_hard_failure_exit_code(monkeypatch, capsys):
    from cyclelab import validate

    monkeypatch.setattr(validate, "run", lambda *a, **k: [
        validate.Check("x", "broken", False, hard=True, detail="forced"),
        validate.Check("x", "soft", False, hard=False, detail="report only"),
    ])
    assert main(["validate"]) == 3
    out = capsys.readouterr().out
    assert "[FAIL] x/broken" in out and "[WARN] x/soft (diagnostic)" in out

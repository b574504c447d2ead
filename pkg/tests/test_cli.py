import csv
import json
import math
import subprocess
import sys

import pytest

from quarterplane.cli import main
from quarterplane.oracle import erfc_solution


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_solve_heat_step_grid(tmp_path):
    out = tmp_path / "run"
    code = main(["solve", "--eq", "heat", "--u0", "0", "--g0", "1", "--f", "0",
                 "--grid", "0.05:20:5,0.05:10:4", "--out", str(out), "--quiet"])
    assert code == 0
    rows = read_csv(out / "solution.csv")
    assert len(rows) == 20 and list(rows[0]) == ["x", "t", "value", "abs_error"]
    for r in rows:
        assert abs(float(r["value"]) - erfc_solution(float(r["x"]), float(r["t"]))) <= 1e-8
    man = json.loads((out / "manifest.json").read_text())
    assert man["warnings"] and not man["compatibility"][0]["passed"]
    assert list(man) == sorted(man)


def test_solve_kdv_step_point(tmp_path):
    from quarterplane.kdv import example2_v
    code = main(["solve", "--eq", "kdv", "--u0", "0", "--g0", "1", "--f", "0",
                 "--points", "1,1", "--out", str(tmp_path), "--quiet"])
    assert code == 0
    (row,) = read_csv(tmp_path / "solution.csv")
    assert abs(float(row["value"]) - example2_v(1, 1)) <= 5e-10


def test_solve_zero_data(tmp_path):
    code = main(["solve", "--eq", "heat", "--u0", "0", "--g0", "0", "--f", "0",
                 "--grid", "0.1:1:3,0.1:1:3", "--out", str(tmp_path), "--quiet"])
    assert code == 0
    assert all(float(r["value"]) == 0 for r in read_csv(tmp_path / "solution.csv"))


def test_solve_builtin_reports_true_error(tmp_path):
    code = main(["solve", "--eq", "heat", "--data", "exp-compat", "--points", "0.5,0.5;1,2",
                 "--out", str(tmp_path), "--quiet"])
    assert code == 0
    rows = read_csv(tmp_path / "solution.csv")
    for r in rows:
        assert float(r["abs_error"]) < 1e-9
        assert abs(float(r["value"]) - math.exp(float(r["t"]) - float(r["x"]))) < 1e-9
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["warnings"] == []


def test_env_tolerance(tmp_path, monkeypatch):
    monkeypatch.setenv("QUARTERPLANE_TOL", "1e-6")
    main(["solve", "--eq", "heat", "--data", "step", "--points", "1,1", "--out",
          str(tmp_path), "--quiet"])
    assert json.loads((tmp_path / "manifest.json").read_text())["tol"] == 1e-6


def test_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"eq": "heat", "data": "step", "points": "2,1",
                               "out": str(tmp_path / "o"), "quiet": True}))
    assert main(["solve", "--config", str(cfg)]) == 0
    (row,) = read_csv(tmp_path / "o" / "solution.csv")
    assert abs(float(row["value"]) - erfc_solution(2, 1)) < 1e-9
    cfg.write_text(json.dumps({"bogus": 1}))
    assert main(["solve", "--config", str(cfg)]) == 2


def test_counterexample_heat(tmp_path):
    code = main(["counterexample", "--eq", "heat", "--n", "1", "--grid", "0.1:5:4,0.1:2:3",
                 "--out", str(tmp_path), "--quiet"])
    assert code == 0
    cert = json.loads((tmp_path / "certificate.json").read_text())
    assert abs(cert["l2_exponent_fit"]["p"] + 1.5) < 0.01
    assert cert["envelope_violation"]
    assert len(read_csv(tmp_path / "witness.csv")) == 12
    assert "uniform L2" in (tmp_path / "explain.txt").read_text()


def test_counterexample_kdv(tmp_path):
    code = main(["counterexample", "--eq", "kdv", "--n", "2", "--grid", "0.1:5:3,0.1:2:2",
                 "--out", str(tmp_path), "--quiet"])
    assert code == 0
    cert = json.loads((tmp_path / "certificate.json").read_text())
    assert [k for k, v in cert["clauses"].items() if not v] == ["integrability"]


@pytest.mark.parametrize("argv", [
    ["counterexample", "--eq", "heat", "--n", "0", "--out", "x"],
    ["counterexample", "--eq", "kdv", "--n", "9", "--out", "x"],
    ["solve", "--eq", "heat", "--u0", "exp(", "--out", "x"],
    ["solve", "--eq", "heat", "--data", "nope", "--out", "x"],
    ["solve", "--eq", "wave", "--out", "x"],
])
def test_usage_errors(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 2


def test_verify_commands(tmp_path, capsys):
    assert main(["verify", "--eq", "heat", "--data", "zero", "--candidate", "witness:1",
                 "--quiet"]) == 1
    report = tmp_path / "r.json"
    assert main(["verify", "--eq", "heat", "--data", "exp-compat", "--candidate",
                 "exp(t-x)", "--out", str(report)]) == 0
    out = capsys.readouterr().out
    assert "residual" in out and "FAIL" not in out
    assert json.loads(report.read_text())["all_pass"]
    assert main(["verify", "--eq", "heat", "--data", "zero", "--candidate", "x^2",
                 "--quiet"]) == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "quarterplane", "--help"], capture_output=True,
                       text=True)
    assert r.returncode == 0 and "counterexample" in r.stdout

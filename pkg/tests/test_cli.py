import io
import json
import subprocess
import sys

import numpy as np
import pytest

from rangeproc.cli import main
from rangeproc.paths import read_path_csv


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_drift_rows(tmp_path, capsys):
    dest = tmp_path / "v.csv"
    code, _, _ = run(["simulate", "--process", "drift:1.0", "--horizon", "100", "--step",
                      "0.01", "--seed", "1", "--out", str(dest)], capsys)
    assert code == 0
    lines = dest.read_text().splitlines()
    assert lines[0] == "t,value"
    assert len(lines) == 10_001 + 1
    p = read_path_csv(dest)
    assert p.times[0] == 0 and p.horizon == pytest.approx(100)


def test_simulate_walk_writes_integers(capsys):
    code, out, _ = run(["simulate", "--process", "walk:0.5", "--horizon", "50",
                        "--seed", "3"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,value" and len(lines) == 52
    vals = [int(line.split(",")[1]) for line in lines[1:]]
    assert vals[0] == 0 and all(abs(b - a) == 1 for a, b in zip(vals, vals[1:]))


def test_simulate_multidim_one_file_per_coordinate(tmp_path, capsys):
    dest = tmp_path / "b.csv"
    code, _, _ = run(["simulate", "--process", "mbm:2", "--horizon", "1", "--step", "0.1",
                      "--seed", "3", "--out", str(dest)], capsys)
    assert code == 0
    assert (tmp_path / "b_1.csv").exists() and (tmp_path / "b_2.csv").exists()


def test_simulate_requires_seed(capsys):
    code, _, err = run(["simulate", "--process", "bm", "--horizon", "10"], capsys)
    assert code == 2
    assert err.startswith("rangeproc: error:") and "seed" in err
    assert len(err.strip().splitlines()) == 1


def test_simulate_is_reproducible(capsys):
    argv = ["simulate", "--process", "bessel:3", "--horizon", "5", "--step", "0.5",
            "--seed", "9"]
    assert run(argv, capsys)[1] == run(argv, capsys)[1]


def test_config_roundtrip(tmp_path, capsys):
    cfg = tmp_path / "p.cfg"
    a = run(["simulate", "--process", "pnorm:2:inf", "--horizon", "3", "--step", "0.5",
             "--seed", "4", "--save-config", str(cfg)], capsys)[1]
    b = run(["simulate", "--config", str(cfg)], capsys)[1]
    assert a == b


def test_range_from_pipe(capsys, monkeypatch):
    csv = "t,value\n0,0\n1,2\n2,-1\n3,3\n"
    code, out, _ = run(["range"], capsys, stdin=csv, monkeypatch=monkeypatch)
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()]
    assert rows[0] == ["t", "value", "sup", "inf", "range"]
    assert [float(r[4]) for r in rows[1:]] == [0, 2, 3, 4]


def test_range_constant_input(capsys, monkeypatch):
    csv = "t,value\n0,5\n1,5\n2,5\n"
    code, out, _ = run(["range", "--format", "json"], capsys, stdin=csv,
                       monkeypatch=monkeypatch)
    assert code == 0 and json.loads(out)["range"] == [0, 0, 0]


def test_range_rejects_decreasing_time(capsys, monkeypatch):
    csv = "t,value\n0,0\n2,1\n1,3\n"
    code, _, err = run(["range"], capsys, stdin=csv, monkeypatch=monkeypatch)
    assert code == 2 and "line 4" in err


def test_range_missing_file(capsys):
    code, _, err = run(["range", "--in", "/nonexistent/x.csv"], capsys)
    assert code == 2 and err.startswith("rangeproc: error:")


def test_inverse_levels(capsys, monkeypatch):
    csv = "t,value\n0,0\n1,2\n2,3\n3,4\n"
    code, out, _ = run(["inverse", "--levels", "2.5,10"], capsys, stdin=csv,
                       monkeypatch=monkeypatch)
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()]
    assert rows[0] == ["level", "time"]
    assert float(rows[1][1]) == pytest.approx(1.5, abs=1e-12)
    assert rows[2][1] == "inf"


def test_inverse_of_path_conventions(capsys, monkeypatch):
    csv = "t,value\n0,0\n1,1\n2,1\n3,2\n"
    strict = run(["inverse", "--of", "path", "--levels", "1"], capsys, stdin=csv,
                 monkeypatch=monkeypatch)[1]
    weak = run(["inverse", "--of", "path", "--levels", "1", "--convention", "weak"], capsys,
               stdin=csv, monkeypatch=monkeypatch)[1]
    assert float(strict.splitlines()[1].split(",")[1]) == 2.0
    assert float(weak.splitlines()[1].split(",")[1]) == 1.0


def test_inverse_ladder(capsys, monkeypatch):
    t = np.arange(0, 101.0)
    csv = "t,value\n" + "".join(f"{a},{a}\n" for a in t)
    code, out, _ = run(["inverse"], capsys, stdin=csv, monkeypatch=monkeypatch)
    rows = out.splitlines()[1:]
    assert code == 0 and len(rows) == 20


def test_inverse_rejects_non_monotone_path(capsys, monkeypatch):
    csv = "t,value\n0,0\n1,2\n2,1\n"
    code, _, _ = run(["inverse", "--of", "path", "--levels", "1"], capsys, stdin=csv,
                     monkeypatch=monkeypatch)
    assert code == 2


def test_verify_unknown_check(capsys):
    code, _, err = run(["verify", "--process", "bm", "--horizon", "10", "--seed", "1",
                        "--checks", "range_slope,bogus"], capsys)
    assert code == 2 and "bogus" in err


def test_verify_bad_manifest(tmp_path, capsys):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"name": "x", "spec": {"process": "bm", "horizon": 10.0}}))
    code, _, err = run(["verify", str(m)], capsys)
    assert code == 2 and "seed" in err


def test_verify_renewal_bundle_passes_and_reproduces(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code, _, err = run(["verify", "--bundled", "renewal_exp1", "--replicas", "2",
                        "--no-timestamp", "--out", str(a)], capsys)
    assert code == 0 and "PASS renewal" in err
    run(["verify", "--bundled", "renewal_exp1", "--replicas", "2", "--no-timestamp",
         "--out", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["seed"] == 1003 and rep["passed"] and "timestamp" not in rep


def test_verify_failing_check_exits_one(capsys):
    # against sqrt(t) the ratio of 2t + sin t diverges, so slope 2 cannot be confirmed
    code, out, err = run(["verify", "--process", "fn:linear_sine", "--horizon", "1000",
                          "--step", "0.01", "--seed", "1", "--checks", "range_slope",
                          "--psi", "sqrt"], capsys)
    rep = json.loads(out)
    assert code == 1 and not rep["passed"] and "FAIL range_slope" in err


def test_verify_csv_format(capsys):
    code, out, _ = run(["verify", "--process", "fn:linear_sine", "--horizon", "1000",
                        "--step", "0.1", "--seed", "1", "--format", "csv",
                        "--no-timestamp"], capsys)
    assert code == 0 and out.splitlines()[0] == "check,quantity,value"


def test_no_subcommand(capsys):
    assert run([], capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rangeproc", "simulate", "--process",
                           "walk:1", "--horizon", "3", "--seed", "0"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["n,value", "0,0", "1,1", "2,2", "3,3"]

import json
import subprocess
import sys

import pytest

from dwsolve.cli import main, parse_complex, parse_grid


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_helpers():
    assert parse_complex("0.3") == 0.3
    assert parse_complex("0.3+0.1i") == 0.3 + 0.1j
    assert parse_complex("-2i") == -2j
    assert len(parse_grid("0:1:5")) == 5


def test_z_discrete(capsys):
    code, out, _ = run(capsys, "z", "--n", "5", "--m", "1", "--L", "2", "--random", "--seed", "7")
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "pass" and doc["rel_diff"] < 1e-9


def test_z_n4_spec_example(capsys):
    code, out, _ = run(capsys, "z", "--n", "4", "--m", "1", "--L", "2", "--random", "--seed", "7")
    assert code == 0
    assert json.loads(out)["status"] == "degenerate"


def test_z_negative_control(capsys):
    code, out, _ = run(capsys, "z", "--n", "4", "--lambda", "0.37", "--force-continuous", "--L", "2", "--random", "--seed", "7")
    assert code == 2
    assert json.loads(out)["status"] == "fail"


def test_z_explicit_rapidities(capsys):
    code, out, _ = run(capsys, "z", "--n", "5", "--m", "1", "--L", "1", "--x", "0.3", "--y", "0.55")
    doc = json.loads(out)
    assert code == 0
    assert abs(doc["z_bruteforce"]["re"] - 0.5 * 2**0.5) < 1e-15  # [2][3] at lam = pi/4


def test_z_complex_rapidities(capsys):
    code, out, _ = run(capsys, "z", "--n", "5", "--m", "1", "--x", "0.3+0.1i,0.5", "--y", "0.2,0.7-0.2i")
    assert code == 0


def test_usage_errors(capsys):
    assert run(capsys, "z", "--n", "4", "--lambda", "0.37")[0] == 64
    assert run(capsys, "z", "--n", "4")[0] == 64
    assert run(capsys, "z", "--n", "3", "--m", "1")[0] == 64
    assert run(capsys, "z", "--n", "5", "--m", "1", "--x", "0.1")[0] == 64
    assert run(capsys, "z", "--n", "5", "--m", "1", "--x", "0.1", "--y", "zz")[0] == 64
    with pytest.raises(SystemExit) as e:
        main(["z", "--bogus"])
    assert e.value.code == 64
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 64


def test_budget_exit(capsys, monkeypatch):
    monkeypatch.setenv("DWSOLVE_BUDGET", "10")
    assert run(capsys, "z", "--n", "5", "--m", "1", "--L", "2")[0] == 65


def test_runtime_error_exit(capsys):
    code, _, err = run(capsys, "z", "--n", "5", "--m", "1", "--x", "0.3,0.3", "--y", "0.1,0.5")
    assert code == 1 and "PoleError" in err


def test_verify(capsys, tmp_path):
    out = tmp_path / "report.json"
    assert run(capsys, "verify", "--n", "4", "--m", "1", "--L", "2", "--seed", "42", "--out", str(out))[0] == 0
    assert json.loads(out.read_text())["checks"][-1]["status"] == "pass"
    assert run(capsys, "verify", "--n", "3", "--lambda", "0.37", "--L", "2")[0] == 0
    assert run(capsys, "verify", "--n", "4", "--lambda", "0.37", "--force-continuous", "--L", "2")[0] == 2


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "--n", "3", "--lambda", "0.37", "--L", "1", "--format", "csv")
    assert code == 0 and out.startswith("campaign,n,m,lambda,L,seed,name,status")


def test_verify_deterministic_bytes(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    base = ["verify", "--n", "5", "--m", "1", "--L", "2", "--seed", "3", "--deterministic"]
    assert run(capsys, *base, "--workers", "1", "--out", str(a))[0] == 0
    assert run(capsys, *base, "--workers", "8", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--n", "4", "--L", "2", "--grid", "0.2:3.0:12")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "lambda,rel_diff,status,m"
    assert len(lines) == 1 + 12 + 1  # grid plus the inserted pi/2
    code, out, _ = run(capsys, "sweep", "--n", "3", "--L", "2", "--grid", "0.2:3.0:5", "--format", "json")
    assert code == 0 and json.loads(out)["campaign"].startswith("lambda-sweep")
    assert run(capsys, "sweep", "--n", "4", "--grid", "1:2")[0] == 64


def test_dump_r(capsys):
    code, out, _ = run(capsys, "dump-r", "--n", "3", "--lambda", "0.4", "--u", "0.3")
    doc = json.loads(out)
    assert code == 0 and doc["nonzero"] == 19 and doc["shape"] == [9, 9]
    code, out, _ = run(capsys, "dump-r", "--n", "5", "--m", "1", "--u", "0")
    doc = json.loads(out)
    assert all(not (e["rho"] == e["sigma"] and e["mu"] == e["nu"] and e["rho"] != e["mu"] and e["mu"] != 6 - e["rho"]) for e in doc["entries"])


def test_dump_r_matches_library(capsys):
    import numpy as np

    from dwsolve.model import ModelParams, assemble_r_matrix

    code, out, _ = run(capsys, "dump-r", "--n", "4", "--m", "1", "--u", "0.25")
    R = assemble_r_matrix(0.25, ModelParams.discrete(4, 1))
    doc = json.loads(out)
    D = np.zeros_like(R)
    for e in doc["entries"]:
        D[e["row"], e["col"]] = e["value"]["re"] + 1j * e["value"]["im"]
    assert np.array_equal(D, R)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dwsolve", "z", "--n", "5", "--m", "1", "--L", "1"], capture_output=True, text=True)
    assert res.returncode == 0 and "z_determinant" in res.stdout

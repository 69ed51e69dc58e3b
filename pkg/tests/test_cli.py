import json
import subprocess
import sys

import numpy as np
import pytest

from numrad import linalg as la
from numrad.cli import main


@pytest.fixture
def mfile(tmp_path):
    def write(a, name="m.json"):
        p = tmp_path / name
        p.write_text(la.dumps_matrix(np.asarray(a, dtype=complex)))
        return str(p)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_radius_of_jordan_block(capsys, mfile):
    code, out, _ = run(capsys, "compute", "--matrix", mfile([[0, 1], [0, 0]]), "--quantity", "w")
    res = json.loads(out)
    assert code == 0
    assert abs(res["value"] - 0.5) <= 1e-9 and res["error_radius"] <= 1e-9


def test_compute_norm_of_identity(capsys, mfile):
    code, out, _ = run(capsys, "compute", "--matrix", mfile(np.eye(2)), "--quantity", "norm")
    assert code == 0 and json.loads(out)["value"] == 1.0


def test_compute_aluthge_roundtrip(capsys, mfile, tmp_path):
    code, out, _ = run(capsys, "compute", "--matrix", mfile([[0, 1], [0, 0]]), "--quantity", "aluthge", "--t", "0.5")
    assert code == 0
    assert not np.any(la.loads_matrix(out))
    a = np.random.default_rng(0).standard_normal((3, 3)) + 0.5j
    target = tmp_path / "out.json"
    code, _, _ = run(capsys, "compute", "--matrix", mfile(a), "--quantity", "aluthge", "--t", "0.3", "--out", str(target))
    first = la.loads_matrix(target.read_text())
    assert la.loads_matrix(la.dumps_matrix(first)).tobytes() == first.tobytes()


def test_compute_polar(capsys, mfile):
    a = np.array([[1, 2j], [0, 3]])
    code, out, _ = run(capsys, "compute", "--matrix", mfile(a), "--quantity", "polar")
    obj = json.loads(out)
    u, p = la.matrix_from_dict(obj["isometry"]), la.matrix_from_dict(obj["positive"])
    assert code == 0 and np.allclose(u @ p, a)


@pytest.mark.parametrize(
    "text", ['{"rows": 2, "cols": 2, "data": [[0, 0]]}', "not json", '{"rows": 1, "cols": 2, "data": [[0,0],[1,0]]}']
)
def test_compute_malformed_input(capsys, tmp_path, text):
    p = tmp_path / "bad.json"
    p.write_text(text)
    code, out, err = run(capsys, "compute", "--matrix", str(p), "--quantity", "w")
    assert code == 2 and out == "" and "error" in err


def test_compute_usage_errors(capsys, mfile, tmp_path):
    j = mfile([[0, 1], [0, 0]])
    assert run(capsys, "compute", "--matrix", j, "--quantity", "aluthge")[0] == 2
    assert run(capsys, "compute", "--matrix", j, "--quantity", "aluthge", "--t", "2")[0] == 2
    assert run(capsys, "compute", "--matrix", str(tmp_path / "missing.json"), "--quantity", "w")[0] == 2
    assert run(capsys, "compute", "--matrix", j, "--quantity", "trace")[0] == 2
    assert run(capsys)[0] == 2


def test_check_nilpotent_final_remark(capsys):
    code, out, err = run(capsys, "check", "--entry", "R-zero", "--family", "nilpotent", "--trials", "20")
    reports = json.loads(out)
    assert code == 0
    assert [r["spec"]["dim"] for r in reports] == [2]
    assert "R-zero nilpotent n=2" in err


def test_check_unknown_entry(capsys):
    code, out, err = run(capsys, "check", "--entry", "NOPE")
    assert code == 2 and out == "" and "unknown entry" in err


def test_check_rejects_entry_without_compatible_spec(capsys):
    assert run(capsys, "check", "--entry", "C-nilp", "--family", "gaussian", "--trials", "1")[0] == 2


def test_check_reports_violations(capsys, tmp_path):
    out_file = tmp_path / "r.csv"
    code, out, _ = run(
        capsys, "check", "--entry", "R-II", "--family", "gaussian", "--dims", "2", "--trials", "60",
        "--format", "csv", "--out", str(out_file), "--quiet",
    )
    assert code == 1 and out == ""
    rows = out_file.read_text().strip().splitlines()
    assert len(rows) == 2 and int(rows[1].split(",")[13]) > 0


def test_check_dims_and_bad_values(capsys):
    code, out, _ = run(capsys, "check", "--entry", "L1.1b", "--family", "psd", "--dims", "2,3", "--trials", "3", "--quiet")
    assert code == 0 and len(json.loads(out)) == 2
    assert run(capsys, "check", "--dims", "x..y")[0] == 2
    assert run(capsys, "check", "--trials", "0")[0] == 2
    assert run(capsys, "check", "--tol", "-1")[0] == 2
    assert run(capsys, "check", "--format", "xml")[0] == 2


def test_sweep_refined_bound(capsys):
    code, out, _ = run(capsys, "sweep", "--entry", "T2.8-aluthge", "--trials", "5")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 19
    assert all(r["min_margin"] >= -1e-8 for r in rows)


def test_sweep_single_point_and_identity(capsys):
    code, out, _ = run(capsys, "sweep", "--entry", "C-wAB", "--t-grid", "0.5", "--trials", "5", "--format", "csv")
    assert code == 0 and len(out.strip().splitlines()) == 2
    code, out, _ = run(capsys, "sweep", "--entry", "E4-identity", "--trials", "5")
    assert code == 0 and all(abs(r["min_margin"]) <= 1e-8 for r in json.loads(out))


def test_sweep_requires_t_entry(capsys):
    assert run(capsys, "sweep", "--entry", "L1.1b")[0] == 2
    assert run(capsys, "sweep", "--entry", "T2.8-aluthge", "--t-grid", "1.5")[0] == 2


def test_search(capsys):
    code, out, _ = run(capsys, "search", "--entry", "L1.1a-eq10", "--budget", "2000")
    assert code == 0 and json.loads(out)["best_margin"] <= 1e-6
    assert run(capsys, "search", "--entry", "L1.1a-eq10", "--budget", "0")[0] == 2
    assert run(capsys, "search", "--entry", "NOPE")[0] == 2


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 35
    assert lines[0].startswith("EQ-equiv-lo\tINEQUALITY")
    code, out, _ = run(capsys, "list", "--format", "json")
    assert len(json.loads(out)) == 35


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "numrad.cli", "list"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and len(proc.stdout.strip().splitlines()) == 35

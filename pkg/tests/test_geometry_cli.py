"""Geometry reports and the command-line interface.

CLI coverage calls main() in-process for speed; a few subprocess tests
pin the console-script wiring, the exit codes, and the seed handling.
"""

import json
import subprocess
import sys

import pytest

from locsym import (
    Matrix,
    UnsupportedError,
    branch_disjointness,
    builtin,
    geometry_report,
    locaut_pattern,
    save_operator,
    zero_algebra,
)
from locsym.cli import main

DIAG_BUMP = [[1, 0, 0, 0, 0], [0, 2, 0, 0, 0], [0, 0, 1, 0, 0],
             [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]


def run_cli(*argv):
    return main(list(argv))


def run_script(*argv, env=None):
    import os
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        ["locsym", *argv], capture_output=True, text=True, env=full_env
    )


# -- geometry reports ----------------------------------------------------------

def test_geometry_values(pi2, pi3):
    r2 = geometry_report(pi2)
    assert (r2.dim, r2.components, r2.lie_group) == (11, 1, True)
    r3 = geometry_report(pi3)
    assert (r3.dim, r3.components, r3.lie_group) == (7, 2, False)


def test_geometry_rationale_separates_checked_from_asserted(pi2, pi3):
    r2, r3 = geometry_report(pi2), geometry_report(pi3)
    assert "asserted" in r2.rationale
    assert "disjoint" in r3.rationale and "checked exactly" in r3.rationale


def test_branch_disjointness(pi3):
    assert branch_disjointness(locaut_pattern(pi3))


def test_geometry_refuses_foreign_algebras():
    with pytest.raises(UnsupportedError):
        geometry_report(zero_algebra(5))


def test_geometry_to_dict(pi3):
    d = geometry_report(pi3).to_dict()
    assert d["dim"] == 7 and d["components"] == 2
    assert d["lie_group"] is False


# -- in-process CLI: exit codes and payloads --------------------------------------

def test_cli_basis_commands(capsys):
    assert run_cli("der", "basis", "--algebra", "pi3") == 0
    out = capsys.readouterr().out
    assert "operator" in out.lower() or "basis" in out.lower()
    assert run_cli("locder", "basis", "--algebra", "pi3", "--format",
                   "structured") == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["schema"] == "locsym-report/1"
    assert payload["ok"] is True
    assert len(payload["basis"]) == 7


def test_cli_der_check_accepts_and_rejects(tmp_path, capsys):
    good = str(tmp_path / "good.json")
    save_operator(good, Matrix.identity(5) * 0)
    assert run_cli("der", "check", "--algebra", "pi2", "--matrix", good) == 0
    capsys.readouterr()
    bad = str(tmp_path / "bad.json")
    save_operator(bad, Matrix([[0, 1, 0, 0, 0]] + [[0] * 5] * 4))
    assert run_cli("der", "check", "--algebra", "pi2", "--matrix", bad) == 1
    out = capsys.readouterr().out
    assert "counterexample" in out


def test_cli_locaut_witness_finds_refutation(tmp_path, capsys):
    path = str(tmp_path / "bump.json")
    save_operator(path, Matrix(DIAG_BUMP))
    code = run_cli("locaut", "witness", "--algebra", "pi3", "--matrix", path,
                   "--format", "structured")
    assert code == 1
    payload = json.loads(capsys.readouterr().out)
    ce = payload["counterexample"]
    assert ce["kind"] == "locaut_witness"
    witness = [v if isinstance(v, str) else str(v) for v in ce["point"]]
    assert witness == ["0", "1", "0", "1", "0"]


def test_cli_verify_counterexample_round_trip(tmp_path, capsys):
    bump = str(tmp_path / "bump.json")
    save_operator(bump, Matrix(DIAG_BUMP))
    witness_file = str(tmp_path / "warrant.json")
    assert run_cli("locaut", "witness", "--algebra", "pi3", "--matrix", bump,
                   "--format", "structured", "--out", witness_file) == 1
    capsys.readouterr()
    assert run_cli("verify-counterexample", witness_file) == 0
    out = capsys.readouterr().out
    assert "reproduce" in out.lower()


def test_cli_report_geometry(capsys):
    assert run_cli("report", "geometry", "--algebra", "pi2") == 0
    out = capsys.readouterr().out
    assert "11" in out
    assert run_cli("report", "geometry", "--algebra", "pi3",
                   "--format", "structured") == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["lie_group"] is False
    assert payload["components"] == 2


def test_cli_infer(capsys):
    assert run_cli("infer", "--algebra", "pi3", "--format", "structured") == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["validated"] is True
    assert payload["violations"] == []


def test_cli_input_errors(tmp_path, capsys):
    assert run_cli("der", "check", "--algebra", "pi2", "--matrix",
                   str(tmp_path / "missing.json")) == 2
    capsys.readouterr()
    assert run_cli("algebra", "check", "--algebra", "pi7") == 2


def test_cli_unsupported_is_exit_3(tmp_path, capsys):
    from locsym import save_algebra
    path = str(tmp_path / "zero.json")
    save_algebra(path, zero_algebra(3))
    assert run_cli("report", "geometry", "--algebra", path) == 3


def test_cli_log_minus_branch_is_numeric_obstruction(tmp_path, capsys):
    minus = str(tmp_path / "minus.json")
    rows = [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, -1, 0, 0],
            [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]
    save_operator(minus, Matrix(rows))
    assert run_cli("log", "--algebra", "pi3", "--matrix", minus) == 3


def test_cli_exp_log_round_trip(tmp_path, capsys):
    nabla = str(tmp_path / "nabla.json")
    save_operator(nabla, Matrix([
        [1, 0, 0, 0, 0],
        [1, 2, 0, 0, 0],
        [1, 1, 3, 1, 0],
        [0, 0, 0, 1, 0],
        [1, 0, 0, 1, 2],
    ]))
    member = str(tmp_path / "member.json")
    assert run_cli("exp", "--algebra", "pi3", "--matrix", nabla,
                   "--out", member) == 0
    capsys.readouterr()
    assert run_cli("log", "--algebra", "pi3", "--matrix", member,
                   "--method", "structured") == 0
    out = capsys.readouterr().out
    assert "generator" in out.lower() or "log" in out.lower()


def test_cli_bridge(capsys):
    assert run_cli("bridge", "--algebra", "pi3", "--direction", "log",
                   "--trials", "10", "--seed", "4") == 0
    capsys.readouterr()
    assert run_cli("bridge", "--algebra", "pi2", "--direction", "exp",
                   "--trials", "10") == 0


def test_cli_structured_reports_are_deterministic(capsys):
    argv = ("locder", "witness", "--algebra", "pi2", "--seed", "9",
            "--format", "structured")
    assert run_cli(*argv) in (0, 1)
    first = capsys.readouterr().out
    run_cli(*argv)
    second = capsys.readouterr().out
    assert first == second


# -- console script wiring -----------------------------------------------------------

def test_script_algebra_check():
    proc = run_script("algebra", "check", "--algebra", "pi2")
    assert proc.returncode == 0
    assert "associative" in proc.stdout.lower()


def test_script_usage_error_is_exit_2():
    proc = run_script("der", "nonsense")
    assert proc.returncode == 2


def test_script_env_seed_matches_flag():
    via_flag = run_script("bridge", "--algebra", "pi3", "--direction", "exp",
                          "--trials", "5", "--seed", "21",
                          "--format", "structured")
    via_env = run_script("bridge", "--algebra", "pi3", "--direction", "exp",
                         "--trials", "5", "--format", "structured",
                         env={"LOCSYM_SEED": "21"})
    assert via_flag.returncode == via_env.returncode == 0
    assert via_flag.stdout == via_env.stdout

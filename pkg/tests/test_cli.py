import csv
import io
import json

import pytest

from coverlb import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_bound_no_solve_writes_problem_file(tmp_path, capsys):
    out = tmp_path / "p.dat-s"
    code, stdout, _ = run_cli(
        capsys, "bound", "--q", "2", "--n", "4", "--r", "1",
        "--out", str(out), "--no-solve",
    )
    assert code == 0
    assert out.exists()
    doc = json.loads(stdout)
    assert doc["status"] == "notSolved"
    assert doc["inequalities"] == ["sphereCovering", "vanWee"]


def test_bound_solves_small_instance(tmp_path, capsys):
    out = tmp_path / "p.dat-s"
    code, stdout, _ = run_cli(
        capsys, "bound", "--q", "2", "--n", "4", "--r", "1",
        "--out", str(out),
    )
    assert code == 0
    doc = json.loads(stdout)
    assert doc["integerBound"] == 4
    assert doc["status"] in ("optimal", "nearOptimal")
    assert abs(float(doc["rootValue"]) - 4.0) < 0.05


def test_bound_rejects_bad_inequality_selector(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "bound", "--q", "2", "--n", "4", "--r", "1",
        "--ineq", "johnson", "--out", str(tmp_path / "p.dat-s"),
    )
    assert code == 2
    assert "unknown inequality" in err


def test_bound_rejects_vanwee_for_nonbinary(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "bound", "--q", "3", "--n", "4", "--r", "1",
        "--ineq", "sphere,vanwee", "--out", str(tmp_path / "p.dat-s"),
    )
    assert code == 2
    assert "binary only" in err


def test_bound_solver_failure_exit_code(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "bound", "--q", "2", "--n", "3", "--r", "1",
        "--out", str(tmp_path / "p.dat-s"),
        "--solver", "/nonexistent/solver-bin",
    )
    assert code == 3
    assert "solver failed" in err


def test_bound_custom_inequality_file(tmp_path, capsys):
    ineq_file = tmp_path / "custom.ineq"
    ineq_file.write_text("2 4\n1\n1 1 0 0 0\n")
    code, stdout, _ = run_cli(
        capsys, "bound", "--q", "2", "--n", "4", "--r", "1",
        "--ineq", f"file:{ineq_file}", "--out", str(tmp_path / "p.dat-s"),
        "--no-solve",
    )
    assert code == 0
    assert json.loads(stdout)["inequalities"] == ["custom"]


def test_table_lp_mode(capsys):
    code, stdout, err = run_cli(
        capsys, "table", "--q", "2-3", "--n", "3-5", "--r", "1",
        "--method", "lp",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(stdout)))
    assert rows
    for row in rows:
        assert row["flag"] != "UNSOUND"
        assert row["method"] == "lp"
    by_key = {(r["q"], r["n"], r["r"]): r for r in rows}
    assert int(by_key[("3", "4", "1")]["bound"]) == 9


def test_table_sdp_mode_matches_fixture(capsys):
    code, stdout, _ = run_cli(
        capsys, "table", "--q", "2", "--n", "4-5", "--r", "1",
    )
    assert code == 0
    rows = {r["n"]: r for r in csv.DictReader(io.StringIO(stdout))}
    assert rows["4"]["flag"] == "match"
    assert int(rows["4"]["bound"]) == 4
    assert int(rows["5"]["bound"]) == 7


def test_verify_witness_from_file(tmp_path, capsys):
    code_file = tmp_path / "repetition.code"
    code_file.write_text("2 3\n000\n111\n")
    code, stdout, _ = run_cli(
        capsys, "verify", "--suite", "witness", "--code", str(code_file),
        "--r", "1",
    )
    assert code == 0
    assert "pass witness" in stdout


def test_verify_coefficients_small(capsys):
    code, stdout, _ = run_cli(
        capsys, "verify", "--suite", "coefficients", "--qmax", "3",
        "--nmax", "3",
    )
    assert code == 0
    assert "pass coefficients" in stdout


def test_verify_blockmap_single_instance(capsys):
    code, stdout, _ = run_cli(
        capsys, "verify", "--suite", "blockmap", "--q", "2", "--n", "4",
        "--trials", "5",
    )
    assert code == 0


def test_dump_coefficients_deterministic(capsys):
    code1, out1, _ = run_cli(capsys, "dump-coefficients", "--q", "2", "--n", "3")
    code2, out2, _ = run_cli(capsys, "dump-coefficients", "--q", "2", "--n", "3")
    assert code1 == code2 == 0
    assert out1 == out2
    assert " = " in out1.splitlines()[0]


def test_lp_dump(capsys):
    code, stdout, _ = run_cli(
        capsys, "lp-dump", "--q", "2", "--n", "3", "--r", "1"
    )
    assert code == 0
    assert stdout.startswith("min ")


def test_known_bounds_fixture_integrity():
    table = cli.load_known_bounds()
    assert table  # nonempty
    for (q, n, r), entry in table.items():
        assert 2 <= q <= 5 and 0 < r < n
        assert entry["lower"] <= entry["upper"]

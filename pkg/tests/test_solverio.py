import random
from decimal import Decimal
from fractions import Fraction

import pytest

from coverlb.inequalities import default_inequalities
from coverlb.sdpmodel import build_sdp
from coverlb.solverio import (
    STATUS_ERROR,
    STATUS_NEAR,
    STATUS_OPTIMAL,
    SolverReport,
    finalize_bound,
    invoke_solver,
    parse_solver_output,
    read_sdpa_sparse,
    write_sdpa_sparse,
)

F = Fraction


@pytest.fixture(scope="module")
def small_problem():
    return build_sdp(2, 3, 1, default_inequalities(2, 3, 1), "triple")


def test_header_structure(small_problem, tmp_path):
    path = tmp_path / "p.dat-s"
    write_sdpa_sparse(small_problem, str(path))
    lines = path.read_text().splitlines()
    assert int(lines[0]) == small_problem.num_variables()
    sizes = [int(tok) for tok in lines[2].split()]
    assert int(lines[1]) == len(sizes)
    psd = [len(rows) for _, rows in small_problem.psd_blocks]
    assert sizes[:-1] == psd
    assert sizes[-1] == -len(small_problem.linear_constraints)


def test_serialization_deterministic(small_problem, tmp_path):
    a, b = tmp_path / "a.dat-s", tmp_path / "b.dat-s"
    write_sdpa_sparse(small_problem, str(a))
    write_sdpa_sparse(small_problem, str(b))
    assert a.read_bytes() == b.read_bytes()


def test_round_trip_evaluation(small_problem, tmp_path):
    path = tmp_path / "p.dat-s"
    digits = 40
    write_sdpa_sparse(small_problem, str(path), digits)
    data = read_sdpa_sparse(str(path))
    rng = random.Random(7)
    point = [
        F(rng.randint(-50, 50), rng.randint(1, 50))
        for _ in range(small_problem.num_variables())
    ]
    floats = [float(v) for v in point]
    for b, (label, rows) in enumerate(small_problem.psd_blocks, start=1):
        direct = [
            [float(rows[i][j].evaluate(point)) for j in range(len(rows))]
            for i in range(len(rows))
        ]
        parsed = data.block_matrix(b, floats)
        for i in range(len(rows)):
            for j in range(len(rows)):
                assert abs(direct[i][j] - parsed[i][j]) <= 1e-9 * (
                    1 + abs(direct[i][j])
                ), (label, i, j)


def test_round_trip_objective(small_problem, tmp_path):
    path = tmp_path / "p.dat-s"
    write_sdpa_sparse(small_problem, str(path))
    data = read_sdpa_sparse(str(path))
    for v in range(small_problem.num_variables()):
        assert float(data.objective[v]) == pytest.approx(
            float(small_problem.objective.coeffs.get(v, F(0))), abs=1e-30
        )


# ---------------------------------------------------------------------------
# log parsing
# ---------------------------------------------------------------------------


def test_parse_solver_output_basic():
    log = """
    some preamble
    objValPrimal = +1.2345e+02
    objValDual   = +1.2344e+02
    phase.value  = pdOPT
    """
    report = parse_solver_output(log)
    assert report.status == STATUS_OPTIMAL
    assert report.primal_objective == Decimal("123.45")
    assert report.dual_objective == Decimal("123.44")


def test_parse_solver_output_near_optimal():
    log = "objValPrimal = 2.0\nobjValDual = 1.9\nphase.value = pdFEAS\n"
    assert parse_solver_output(log).status == STATUS_NEAR


def test_parse_solver_output_truncated():
    report = parse_solver_output("objValPrimal = 1.0\n")
    assert report.status == STATUS_ERROR
    assert "unparseable" in report.message


# ---------------------------------------------------------------------------
# solver subprocess
# ---------------------------------------------------------------------------

TOY = "1\n1\n1\n1\n0 1 1 1 1\n1 1 1 1 1\n"  # min x s.t. [x] >= [1]


def test_invoke_solver_toy_problem(tmp_path):
    path = tmp_path / "toy.dat-s"
    path.write_text(TOY)
    report = invoke_solver(str(path))
    assert report.status == STATUS_OPTIMAL
    assert float(report.primal_objective) == pytest.approx(1.0, abs=1e-5)
    assert report.raw_log_path and report.wall_time > 0


def test_invoke_solver_missing_executable(tmp_path):
    path = tmp_path / "toy.dat-s"
    path.write_text(TOY)
    report = invoke_solver(str(path), solver_command="/nonexistent/solver-bin")
    assert report.status == STATUS_ERROR
    assert "cannot run" in report.message


def test_invoke_solver_timeout(tmp_path):
    path = tmp_path / "toy.dat-s"
    path.write_text(TOY)
    report = invoke_solver(str(path), timeout=0.0001)
    assert report.status == STATUS_ERROR
    assert "timed out" in report.message


def test_invoke_solver_param_file(tmp_path):
    path = tmp_path / "toy.dat-s"
    path.write_text(TOY)
    param = tmp_path / "params"
    param.write_text("50 unsigned int maxIteration;\n1.0e-9 double epsilonStar;\n")
    report = invoke_solver(str(path), param_file=str(param))
    assert report.status == STATUS_OPTIMAL


# ---------------------------------------------------------------------------
# bound finalization
# ---------------------------------------------------------------------------


def _report(primal: str, dual: str, status=STATUS_OPTIMAL) -> SolverReport:
    return SolverReport(Decimal(primal), Decimal(dual), status)


def test_finalize_bound_examples(small_problem):
    # root values from solved instances map to the expected integers
    cases = [
        ("606.7119", 607),
        ("18.6887", 19),
        ("2047.9999", 2048),
    ]
    for root_text, expected in cases:
        root = Decimal(root_text)
        raw = root**3
        objective = raw / Decimal(2) ** small_problem.scale_power
        report = _report(str(objective), str(objective))
        result = finalize_bound(report, small_problem, Decimal("1e-3"))
        assert result.integer_bound == expected, root_text


def test_finalize_bound_uses_dual_side(small_problem):
    report = _report("10.0", "9.0")
    result = finalize_bound(report, small_problem)
    assert float(result.raw_value) == pytest.approx(9.0 * 2**3)


def test_finalize_bound_near_optimal_subtracts_gap(small_problem):
    near = finalize_bound(_report("10.0", "9.0", STATUS_NEAR), small_problem)
    assert float(near.raw_value) == pytest.approx(8.0 * 2**3)


def test_finalize_bound_clamps_negative(small_problem):
    result = finalize_bound(_report("-0.5", "-1.0"), small_problem)
    assert result.raw_value == 0
    assert result.integer_bound == 0


def test_finalize_bound_rejects_failed_status(small_problem):
    with pytest.raises(ValueError):
        finalize_bound(
            SolverReport(None, None, STATUS_ERROR), small_problem
        )


def test_finalize_bound_monotone(small_problem):
    values = ["1.0", "2.0", "3.5", "100.0"]
    results = [
        finalize_bound(_report(v, v), small_problem).raw_value for v in values
    ]
    assert results == sorted(results)


def test_result_document_schema(small_problem):
    result = finalize_bound(_report("8.0", "8.0"), small_problem)
    doc = result.to_document(["sphereCovering", "vanWee"])
    assert doc["schemaVersion"] == 1
    for key in ("q", "n", "r", "inequalities", "objectiveKind", "rawValue",
                "rootValue", "integerBound", "status", "wallTime"):
        assert key in doc


def test_certify_feasibility_rejects_zero_assignment(small_problem):
    from coverlb.solverio import certify_feasibility

    zero = [F(0)] * small_problem.num_variables()
    report = certify_feasibility(small_problem, zero)
    # the Lasserre corner 4 x00 - 1 is negative at x = 0
    assert not report.feasible
    assert report.min_eigenvalue < 0


def test_degenerate_radii_end_to_end(tmp_path):
    # r = 0 forces the whole space; r = n is satisfied by a single word
    for q, n, r, expected in [(2, 3, 0, 8), (2, 3, 3, 1), (3, 2, 0, 9)]:
        problem = build_sdp(q, n, r, default_inequalities(q, n, r), "triple")
        path = tmp_path / f"deg{q}{n}{r}.dat-s"
        write_sdpa_sparse(problem, str(path))
        report = invoke_solver(str(path))
        assert report.status == STATUS_OPTIMAL
        assert finalize_bound(report, problem).integer_bound == expected


def test_certify_feasibility_dimension_mismatch(small_problem):
    from coverlb.solverio import certify_feasibility

    with pytest.raises(ValueError):
        certify_feasibility(small_problem, [F(0)])

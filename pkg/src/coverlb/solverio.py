"""Serialization to sparse SDPA files, solver subprocess driving, and
conversion of solver objectives into certified integer lower bounds.

The emitted problem is  min c.x  subject to  sum_k x_k F_k - F_0 >= 0
per block; scalar linear constraints are packed into one diagonal block
(negative size in the header, per the SDPA convention).  The dual
objective of this minimization is the certified lower-bound side.
"""

from __future__ import annotations

import decimal
import math
import os
import re
import shlex
import subprocess
import sys
import time
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .sdpmodel import LinearForm, SdpProblem

SOLVER_ENV_VAR = "COVERLB_SDP_SOLVER"

STATUS_OPTIMAL = "optimal"
STATUS_NEAR = "nearOptimal"
STATUS_INFEASIBLE = "infeasible"
STATUS_UNBOUNDED = "unbounded"
STATUS_ERROR = "solverError"

_PHASE_MAP = {
    "pdOPT": STATUS_OPTIMAL,
    "pdFEAS": STATUS_NEAR,
    "pFEAS": STATUS_NEAR,
    "dFEAS": STATUS_NEAR,
    "pFEAS_dINF": STATUS_UNBOUNDED,
    "pdINF": STATUS_INFEASIBLE,
    "pINF_dFEAS": STATUS_INFEASIBLE,
    "pUNBD": STATUS_UNBOUNDED,
    "dUNBD": STATUS_INFEASIBLE,
    "noINFO": STATUS_ERROR,
}


@dataclass
class SolverReport:
    primal_objective: Optional[Decimal]
    dual_objective: Optional[Decimal]
    status: str
    raw_log_path: Optional[str] = None
    wall_time: float = 0.0
    message: str = ""


@dataclass
class BoundResult:
    q: int
    n: int
    r: int
    objective_kind: str
    raw_value: Decimal
    root_value: Decimal
    integer_bound: int
    safety_margin: Decimal
    status: str
    wall_time: float = 0.0

    def to_document(self, inequalities: Sequence[str]) -> dict:
        return {
            "schemaVersion": 1,
            "q": self.q,
            "n": self.n,
            "r": self.r,
            "inequalities": list(inequalities),
            "objectiveKind": self.objective_kind,
            "rawValue": str(self.raw_value),
            "rootValue": str(self.root_value),
            "integerBound": self.integer_bound,
            "status": self.status,
            "wallTime": self.wall_time,
        }


# ---------------------------------------------------------------------------
# SDPA sparse serialization
# ---------------------------------------------------------------------------


def _render(value: Fraction, digits: int) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = decimal.ROUND_HALF_EVEN
        d = Decimal(value.numerator) / Decimal(value.denominator)
    return str(d)


def write_sdpa_sparse(problem: SdpProblem, path: str, decimal_digits: int = 40) -> None:
    """Write ``problem`` in the sparse SDPA input format (byte-deterministic)."""
    if problem.objective.constant:
        raise ValueError("objective must have no constant term")
    m = problem.num_variables()
    sizes = [len(rows) for _, rows in problem.psd_blocks]
    nlin = len(problem.linear_constraints)
    if nlin:
        sizes.append(-nlin)

    lines: List[str] = []
    lines.append(f"{m}")
    lines.append(f"{len(sizes)}")
    lines.append(" ".join(str(s) for s in sizes))
    obj = [problem.objective.coeffs.get(v, Fraction(0)) for v in range(m)]
    lines.append(" ".join(_render(c, decimal_digits) for c in obj))

    def emit_form(lf: LinearForm, block: int, row: int, col: int) -> None:
        if lf.constant:
            lines.append(
                f"0 {block} {row} {col} {_render(-lf.constant, decimal_digits)}"
            )
        for var in sorted(lf.coeffs):
            lines.append(
                f"{var + 1} {block} {row} {col} "
                f"{_render(lf.coeffs[var], decimal_digits)}"
            )

    for b, (_, rows) in enumerate(problem.psd_blocks, start=1):
        size = len(rows)
        for i in range(size):
            for j in range(i, size):
                emit_form(rows[i][j], b, i + 1, j + 1)
    if nlin:
        b = len(problem.psd_blocks) + 1
        for r, lf in enumerate(problem.linear_constraints, start=1):
            emit_form(lf, b, r, r)

    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


@dataclass
class SdpaData:
    """Parsed sparse SDPA problem: min c.x s.t. sum x_k F_k - F_0 >= 0."""

    num_vars: int
    block_sizes: List[int]
    objective: List[Decimal]
    entries: List[Tuple[int, int, int, int, Decimal]]

    def block_matrix(self, block: int, assignment: Sequence[float]) -> List[List[float]]:
        size = abs(self.block_sizes[block - 1])
        mat = [[0.0] * size for _ in range(size)]
        for k, b, i, j, v in self.entries:
            if b != block:
                continue
            coef = float(v)
            term = -coef if k == 0 else coef * float(assignment[k - 1])
            mat[i - 1][j - 1] += term
            if i != j:
                mat[j - 1][i - 1] += term
        return mat


def read_sdpa_sparse(path: str) -> SdpaData:
    tokens_lines: List[str] = []
    with open(path) as fh:
        for line in fh:
            stripped = line.strip()
            if not stripped or stripped[0] in "*\"":
                continue
            tokens_lines.append(stripped)
    clean = [re.sub(r"[{}(),]", " ", ln) for ln in tokens_lines]
    m = int(clean[0].split()[0])
    nblock = int(clean[1].split()[0])
    sizes = [int(tok) for tok in clean[2].split()][:nblock]
    objective = [Decimal(tok) for tok in clean[3].split()]
    if len(objective) != m:
        raise ValueError("objective length does not match mDIM")
    entries = []
    for ln in clean[4:]:
        toks = ln.split()
        if len(toks) != 5:
            raise ValueError(f"malformed entry line: {ln!r}")
        entries.append(
            (int(toks[0]), int(toks[1]), int(toks[2]), int(toks[3]), Decimal(toks[4]))
        )
    return SdpaData(m, sizes, objective, entries)


# ---------------------------------------------------------------------------
# solver subprocess
# ---------------------------------------------------------------------------


def default_solver_command() -> str:
    return os.environ.get(
        SOLVER_ENV_VAR, f"{shlex.quote(sys.executable)} -m coverlb.sdpsolver"
    )


def parse_solver_output(log_text: str) -> SolverReport:
    """Extract objValPrimal / objValDual / phase.value from an SDPA-style log."""

    def grab(name: str) -> Optional[Decimal]:
        match = re.search(
            rf"{name}\s*=\s*([+-]?[0-9.]+(?:[eE][+-]?[0-9]+)?)", log_text
        )
        return Decimal(match.group(1)) if match else None

    primal = grab("objValPrimal")
    dual = grab("objValDual")
    phase = re.search(r"phase\.value\s*=\s*(\S+)", log_text)
    if primal is None or dual is None or phase is None:
        tail = log_text.strip().splitlines()[-1] if log_text.strip() else "<empty>"
        return SolverReport(
            primal, dual, STATUS_ERROR, message=f"unparseable solver log: {tail!r}"
        )
    status = _PHASE_MAP.get(phase.group(1), STATUS_ERROR)
    return SolverReport(primal, dual, status)


def invoke_solver(problem_path: str, solver_command: Optional[str] = None,
                  param_file: Optional[str] = None,
                  timeout: Optional[float] = None) -> SolverReport:
    """Run the SDP solver on ``problem_path`` and parse its log.

    The command must accept ``<input.dat-s> [-p paramfile]`` and print an
    SDPA-style log (objValPrimal, objValDual, phase.value) to stdout.
    """
    command = solver_command or default_solver_command()
    argv = shlex.split(command) + [problem_path]
    if param_file:
        argv += ["-p", param_file]
    log_path = problem_path + ".log"
    start = time.monotonic()
    try:
        proc = subprocess.run(
            argv, capture_output=True, text=True, timeout=timeout
        )
    except subprocess.TimeoutExpired as exc:
        elapsed = time.monotonic() - start
        partial = (exc.stdout or b"")
        if isinstance(partial, bytes):
            partial = partial.decode(errors="replace")
        with open(log_path, "w") as fh:
            fh.write(partial)
        return SolverReport(
            None, None, STATUS_ERROR, log_path, elapsed,
            f"solver timed out after {timeout}s",
        )
    except (FileNotFoundError, PermissionError) as exc:
        return SolverReport(
            None, None, STATUS_ERROR, None, time.monotonic() - start,
            f"cannot run solver command {command!r}: {exc}",
        )
    elapsed = time.monotonic() - start
    log_text = proc.stdout + ("\n" + proc.stderr if proc.stderr else "")
    with open(log_path, "w") as fh:
        fh.write(log_text)
    if proc.returncode != 0:
        return SolverReport(
            None, None, STATUS_ERROR, log_path, elapsed,
            f"solver exited with code {proc.returncode}",
        )
    report = parse_solver_output(log_text)
    report.raw_log_path = log_path
    report.wall_time = elapsed
    return report


# ---------------------------------------------------------------------------
# bound finalization
# ---------------------------------------------------------------------------


def finalize_bound(report: SolverReport, problem: SdpProblem,
                   safety_margin: Decimal = Decimal("1e-4")) -> BoundResult:
    """Turn a solver report into a certified integer lower bound.

    Uses the dual objective (the lower-bound side of the minimization);
    when the status is nearOptimal the duality gap is subtracted as well.
    """
    if report.status not in (STATUS_OPTIMAL, STATUS_NEAR):
        raise ValueError(f"cannot finalize a bound from status {report.status!r}")
    with decimal.localcontext() as ctx:
        ctx.prec = 60
        certified = report.dual_objective
        if certified is None:
            certified = report.primal_objective
        if report.status == STATUS_NEAR and report.primal_objective is not None \
                and report.dual_objective is not None:
            certified = certified - abs(
                report.primal_objective - report.dual_objective
            )
        certified = max(certified, Decimal(0))
        raw = Decimal(problem.q) ** problem.scale_power * certified
        e = problem.bound_exponent
        if raw == 0:
            root = Decimal(0)
        elif e == 1:
            root = +raw
        else:
            root = (raw.ln() / e).exp()
        shifted = root - safety_margin
        bound = int(shifted.to_integral_value(rounding=decimal.ROUND_CEILING))
    return BoundResult(
        q=problem.q,
        n=problem.n,
        r=problem.r,
        objective_kind=problem.objective_kind,
        raw_value=raw,
        root_value=root,
        integer_bound=max(bound, 0),
        safety_margin=safety_margin,
        status=report.status,
        wall_time=report.wall_time,
    )


# ---------------------------------------------------------------------------
# feasibility certification
# ---------------------------------------------------------------------------


@dataclass
class FeasibilityReport:
    worst_linear_slack: Fraction
    min_eigenvalue: float
    objective_value: Fraction
    feasible: bool
    worst_constraint: str = ""


def certify_feasibility(problem: SdpProblem, assignment: Sequence[Fraction],
                        eigen_tolerance: float = 1e-9) -> FeasibilityReport:
    """Check a rational assignment against every constraint of the problem.

    Linear constraints are evaluated exactly; each PSD block is evaluated
    exactly entrywise and its minimum eigenvalue computed in extended
    precision.
    """
    if len(assignment) != problem.num_variables():
        raise ValueError("assignment length does not match variable count")
    import mpmath

    worst = None
    worst_label = ""
    for idx, lf in enumerate(problem.linear_constraints):
        slack = lf.evaluate(assignment)
        if worst is None or slack < worst:
            worst = slack
            worst_label = f"linear[{idx}]"
    if worst is None:
        worst = Fraction(0)

    min_eig = math.inf
    with mpmath.workdps(40):
        for label, rows in problem.psd_blocks:
            size = len(rows)
            mat = mpmath.matrix(size)
            for i in range(size):
                for j in range(i, size):
                    value = rows[i][j].evaluate(assignment)
                    mat[i, j] = mpmath.mpf(value.numerator) / value.denominator
                    mat[j, i] = mat[i, j]
            eigs = mpmath.eigsy(mat, eigvals_only=True)
            low = float(min(eigs))
            if low < min_eig:
                min_eig = low
                if low < -eigen_tolerance:
                    worst_label = f"block {label}"
    if min_eig is math.inf:
        min_eig = 0.0

    objective = problem.objective.evaluate(assignment)
    feasible = worst >= 0 and min_eig >= -eigen_tolerance
    return FeasibilityReport(worst, min_eig, objective, feasible, worst_label)

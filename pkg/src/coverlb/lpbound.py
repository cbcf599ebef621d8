"""Distance-distribution linear program for covering-code lower bounds.

The LP has one variable x_i per distance i = 0..n and three constraint
families driven by a linear inequality set (lambda, beta), all with exact
rational coefficients.  It is solved with a self-contained two-phase
simplex over :class:`fractions.Fraction` using Bland's anti-cycling rule,
so the optimum is exact and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .combinat import intersection_number, krawtchouk
from .inequalities import InequalitySet

ZERO = Fraction(0)
ONE = Fraction(1)


class LpError(Exception):
    """Raised when an LP is infeasible or unbounded."""


@dataclass
class LpProblem:
    """min objective . x  subject to  row . x >= rhs for each constraint,
    with the nonnegativity rows included explicitly."""

    num_vars: int
    constraints: List[Tuple[Tuple[Fraction, ...], Fraction]]
    objective: Tuple[Fraction, ...]
    labels: List[str]

    def dump(self) -> str:
        """Plain-text rendering: objective line, then one constraint per line."""
        lines = ["min " + " ".join(str(c) for c in self.objective)]
        for (row, rhs), label in zip(self.constraints, self.labels):
            lines.append(
                " ".join(str(c) for c in row) + " >= " + str(rhs) + "  # " + label
            )
        return "\n".join(lines) + "\n"


def build_lp(q: int, n: int, ineq: InequalitySet) -> LpProblem:
    """Assemble the LP whose optimum lower-bounds K_q(n, r).

    Objective q^n x_0; for each k = 0..n:
      (i)   sum_i P_k(i) x_i >= 0
      (ii)  sum_i A_i^k x_i - beta x_0 >= 0
      (iii) (sum_i A_i^k + beta) x_0 - sum_i A_i^k x_i >= beta
    where A_i^k = sum_j lambda_j alpha_{i,j}^k, plus x_i >= 0.
    """
    if ineq.n != n:
        raise ValueError("inequality length does not match n")
    m = n + 1
    constraints: List[Tuple[Tuple[Fraction, ...], Fraction]] = []
    labels: List[str] = []

    for k in range(m):
        row = tuple(Fraction(krawtchouk(q, n, k, i)) for i in range(m))
        constraints.append((row, ZERO))
        labels.append(f"krawtchouk_k{k}")

    weight_rows = []
    for k in range(m):
        weight_rows.append(
            [
                sum(
                    lam * intersection_number(q, n, k, i, j)
                    for j, lam in enumerate(ineq.lambdas)
                    if lam
                )
                for i in range(m)
            ]
        )

    for k in range(m):
        a = weight_rows[k]
        row = [Fraction(c) for c in a]
        row[0] -= ineq.beta
        constraints.append((tuple(row), ZERO))
        labels.append(f"covering_k{k}")

    for k in range(m):
        a = weight_rows[k]
        row = [-Fraction(c) for c in a]
        row[0] += sum(a) + ineq.beta
        constraints.append((tuple(row), ineq.beta))
        labels.append(f"complement_k{k}")

    for i in range(m):
        row = [ZERO] * m
        row[i] = ONE
        constraints.append((tuple(row), ZERO))
        labels.append(f"nonneg_x{i}")

    objective = tuple(
        Fraction(q**n) if i == 0 else ZERO for i in range(m)
    )
    return LpProblem(m, constraints, objective, labels)


# ---------------------------------------------------------------------------
# exact simplex
# ---------------------------------------------------------------------------


def _pivot(tableau: List[List[Fraction]], basis: List[int], row: int, col: int) -> None:
    piv = tableau[row][col]
    tableau[row] = [v / piv for v in tableau[row]]
    for r, line in enumerate(tableau):
        if r != row and line[col]:
            factor = line[col]
            tableau[r] = [v - factor * w for v, w in zip(line, tableau[row])]
    basis[row] = col


def _run_simplex(tableau: List[List[Fraction]], basis: List[int],
                 num_cols: int) -> None:
    """Minimize the cost row (last row) in place; Bland's rule throughout."""
    while True:
        cost = tableau[-1]
        col = next((c for c in range(num_cols) if cost[c] < 0), None)
        if col is None:
            return
        best_row = None
        best_ratio = None
        for r in range(len(tableau) - 1):
            coef = tableau[r][col]
            if coef <= 0:
                continue
            ratio = tableau[r][-1] / coef
            if (
                best_ratio is None
                or ratio < best_ratio
                or (ratio == best_ratio and basis[r] < basis[best_row])
            ):
                best_row, best_ratio = r, ratio
        if best_row is None:
            raise LpError("unbounded")
        _pivot(tableau, basis, best_row, col)


def solve_lp_exact(lp: LpProblem) -> Tuple[Fraction, List[Fraction]]:
    """Exact optimum and an optimal vertex of ``lp`` (two-phase simplex).

    Raises :class:`LpError` on infeasible or unbounded input.
    """
    nvar = lp.num_vars
    rows = len(lp.constraints)
    nsurplus = rows
    nart = rows
    width = nvar + nsurplus + nart + 1

    tableau: List[List[Fraction]] = []
    basis: List[int] = []
    for r, (coeffs, rhs) in enumerate(lp.constraints):
        line = [ZERO] * width
        sign = ONE if rhs >= 0 else -ONE
        for c, v in enumerate(coeffs):
            line[c] = sign * v
        line[nvar + r] = -sign  # surplus of the >= constraint
        line[nvar + nsurplus + r] = ONE
        line[-1] = sign * rhs
        tableau.append(line)
        basis.append(nvar + nsurplus + r)

    # phase 1: minimize the sum of artificials
    cost = [ZERO] * width
    for line in tableau:
        cost = [c - v for c, v in zip(cost, line)]
    for r in range(rows):
        cost[nvar + nsurplus + r] = ZERO
    tableau.append(cost)
    _run_simplex(tableau, basis, nvar + nsurplus)
    if tableau[-1][-1] != 0:
        raise LpError("infeasible")
    tableau.pop()

    # drive any artificial still in the basis out of it
    for r in range(rows):
        if basis[r] >= nvar + nsurplus:
            col = next(
                (c for c in range(nvar + nsurplus) if tableau[r][c]), None
            )
            if col is not None:
                _pivot(tableau, basis, r, col)

    live = [r for r in range(rows) if basis[r] < nvar + nsurplus]
    tableau = [
        tableau[r][: nvar + nsurplus] + [tableau[r][-1]] for r in live
    ]
    basis = [basis[r] for r in live]

    # phase 2: minimize the real objective
    cost = [ZERO] * (nvar + nsurplus) + [ZERO]
    for c, v in enumerate(lp.objective):
        cost[c] = v
    for r, b in enumerate(basis):
        if cost[b]:
            factor = cost[b]
            cost = [v - factor * w for v, w in zip(cost, tableau[r])]
    tableau.append(cost)
    _run_simplex(tableau, basis, nvar + nsurplus)

    solution = [ZERO] * nvar
    for r, b in enumerate(basis):
        if b < nvar:
            solution[b] = tableau[r][-1]
    optimum = -tableau[-1][-1]
    return optimum, solution


def lp_lower_bound(q: int, n: int, ineq: InequalitySet) -> Fraction:
    """Exact LP lower bound on K_q(n, r) for the given inequality set."""
    optimum, _ = solve_lp_exact(build_lp(q, n, ineq))
    return optimum

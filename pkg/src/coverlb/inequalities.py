"""Valid inequality families (lambda_0, ..., lambda_n) beta for covering codes.

A family is valid for covering radius r if every code with covering radius r
satisfies sum_i lambda_i * A_i(u) >= beta at every word u, where A_i(u)
counts codewords at distance exactly i from u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple

from .combinat import binomial


@dataclass(frozen=True)
class InequalitySet:
    """An inequality family (lambda_0, ..., lambda_n) beta."""

    lambdas: Tuple[Fraction, ...]
    beta: Fraction
    provenance: str = "custom"

    def __post_init__(self):
        if any(lam < 0 for lam in self.lambdas):
            raise ValueError("all lambda_i must be nonnegative")
        if self.beta <= 0:
            raise ValueError("beta must be positive")

    @property
    def n(self) -> int:
        return len(self.lambdas) - 1

    def max_support(self) -> int:
        """Largest d with lambda_d nonzero (0 for the all-zero edge case)."""
        return max((d for d, lam in enumerate(self.lambdas) if lam), default=0)


def sphere_covering(q: int, n: int, r: int) -> InequalitySet:
    """Sphere covering inequalities: sum_{i<=r} A_i(u) >= 1."""
    if not 0 <= r <= n:
        raise ValueError(f"need 0 <= r <= n, got r={r}, n={n}")
    lambdas = tuple(Fraction(1 if i <= r else 0) for i in range(n + 1))
    return InequalitySet(lambdas, Fraction(1), "sphereCovering")


def van_wee(n: int, r: int) -> InequalitySet:
    """Van Wee inequalities (binary only); rejects r = n."""
    if not 0 <= r < n:
        raise ValueError(f"van Wee requires 0 <= r < n, got r={r}, n={n}")
    m = Fraction(math.ceil(Fraction(n + 1, r + 1)))
    lambdas = [Fraction(0)] * (n + 1)
    for i in range(r):
        lambdas[i] = m
    lambdas[r] = Fraction(1)
    lambdas[r + 1] = Fraction(1)
    return InequalitySet(tuple(lambdas), m, "vanWee")


def ceil_strengthen(ineq: InequalitySet) -> InequalitySet:
    """Component-wise ceiling; valid because the A_i(u) are integers."""
    lambdas = tuple(Fraction(math.ceil(lam)) for lam in ineq.lambdas)
    beta = Fraction(math.ceil(ineq.beta))
    return InequalitySet(lambdas, beta, "ceilStrengthened")


def plain_lower_bound(q: int, n: int, ineq: InequalitySet) -> Fraction:
    """Averaged bound: beta * q^n / sum_i lambda_i C(n,i) (q-1)^i."""
    denom = sum(
        lam * binomial(n, i) * (q - 1) ** i for i, lam in enumerate(ineq.lambdas)
    )
    if denom == 0:
        raise ZeroDivisionError("inequality family has empty support")
    return Fraction(ineq.beta * q**n) / denom


def parse_inequality_file(text: str) -> Tuple[int, int, InequalitySet]:
    """Parse the custom inequality format.

    Line 1: ``q n``; line 2: beta as a rational; line 3: the n+1 lambdas.
    Returns (q, n, inequality).
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 3:
        raise ValueError("inequality file needs 3 nonempty lines")
    q, n = (int(tok) for tok in lines[0].split())
    beta = Fraction(lines[1].strip())
    lambdas = tuple(Fraction(tok) for tok in lines[2].split())
    if len(lambdas) != n + 1:
        raise ValueError(f"expected {n + 1} lambdas, got {len(lambdas)}")
    return q, n, InequalitySet(lambdas, beta, "custom")


def format_inequality_file(q: int, n: int, ineq: InequalitySet) -> str:
    lams = " ".join(str(lam) for lam in ineq.lambdas)
    return f"{q} {n}\n{ineq.beta}\n{lams}\n"


def default_inequalities(q: int, n: int, r: int) -> List[InequalitySet]:
    """Sphere covering always; van Wee additionally when q = 2 and r < n."""
    ineqs = [sphere_covering(q, n, r)]
    if q == 2 and r < n:
        ineqs.append(van_wee(n, r))
    return ineqs

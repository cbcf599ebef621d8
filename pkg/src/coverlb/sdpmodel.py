"""Assembly of the symmetry-reduced covering-code SDP as exact rational data.

Variables are indexed by canonical orbit-index classes (one id per class of
indices identified by the pair-symmetry rule).  Every PSD block and linear
constraint is a matrix/vector of :class:`LinearForm`, so the emitted problem
is exact until serialization.

All half-integer powers of binomials and of (q-1) that appear in the
literature's normalized block maps are removed by positive diagonal
congruences; border vectors carry the squared weights C(n,i) (q-1)^i
accordingly, keeping every coefficient rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .combinat import (
    alpha_nonbinary_scaled,
    beta_binary,
    binomial,
    block_index_pairs,
    eta_row_binary,
    eta_rows_qary,
    in_index_set,
    index_set,
    lambda_weight_table,
    multinomial,
)
from .inequalities import InequalitySet

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LinearForm:
    """Sparse rational linear form: sum of coeffs[v] * x_v plus a constant."""

    coeffs: Dict[int, Fraction] = field(default_factory=dict)
    constant: Fraction = ZERO

    def add_term(self, var: int, coef: Fraction) -> None:
        if not coef:
            return
        new = self.coeffs.get(var, ZERO) + coef
        if new:
            self.coeffs[var] = new
        else:
            self.coeffs.pop(var, None)

    def add(self, other: "LinearForm", scale: Fraction = ONE) -> None:
        if not scale:
            return
        for var, coef in other.coeffs.items():
            self.add_term(var, coef * scale)
        self.constant += other.constant * scale

    def scaled(self, factor: Fraction) -> "LinearForm":
        if not factor:
            return LinearForm()
        return LinearForm(
            {v: c * factor for v, c in self.coeffs.items()}, self.constant * factor
        )

    def evaluate(self, assignment: Sequence[Fraction]) -> Fraction:
        return self.constant + sum(
            coef * assignment[v] for v, coef in self.coeffs.items()
        )

    def is_zero(self) -> bool:
        return not self.coeffs and not self.constant

    def key(self) -> tuple:
        """Hashable canonical form, for deduplication."""
        return (tuple(sorted(self.coeffs.items())), self.constant)


class VariableTable:
    """Canonical orbit-index variables for I(q, n).

    Two indices share an id iff they are identified by the pair symmetry:
    binary when (i, j, i+j-2t) is a permutation of (i', j', i'+j'-2t');
    nonbinary additionally requires t - p = t' - p'.  The representative of
    a class is its lexicographic minimum, and ids follow lexicographic
    order of the representatives.
    """

    def __init__(self, q: int, n: int):
        self.q = q
        self.n = n
        self.entries: List[tuple] = []
        self._id_by_key: Dict[tuple, int] = {}
        self._id_by_index: Dict[tuple, int] = {}
        for idx in index_set(q, n):
            key = self._class_key(idx)
            vid = self._id_by_key.get(key)
            if vid is None:
                vid = len(self.entries)
                self._id_by_key[key] = vid
                self.entries.append(idx)
            self._id_by_index[idx] = vid

    def _class_key(self, idx: tuple) -> tuple:
        if self.q == 2:
            i, j, t = idx
            return tuple(sorted((i, j, i + j - 2 * t)))
        i, j, t, p = idx
        return tuple(sorted((i, j, i + j - t - p))) + (t - p,)

    def __len__(self) -> int:
        return len(self.entries)

    def canonicalize(self, idx: tuple) -> int:
        vid = self._id_by_index.get(idx)
        if vid is None:
            raise ValueError(f"{idx} is not in I({self.q},{self.n})")
        return vid

    def representative(self, vid: int) -> tuple:
        return self.entries[vid]

    def pair_id(self, dist: int) -> int:
        """Id of the pure pair variable x_{dist,0}^{0[,0]}."""
        if self.q == 2:
            return self.canonicalize((dist, 0, 0))
        return self.canonicalize((dist, 0, 0, 0))

    def form(self, idx: tuple, coef: Fraction = ONE) -> LinearForm:
        lf = LinearForm()
        lf.add_term(self.canonicalize(idx), coef)
        return lf


@dataclass
class SdpProblem:
    """Exact rational SDP in block form, to be minimized.

    The emitted objective omits the q^n factor; the true bound on
    K_q(n,r)^bound_exponent is q^scale_power times the optimum.
    """

    q: int
    n: int
    r: int
    variables: VariableTable
    psd_blocks: List[Tuple[str, List[List[LinearForm]]]]
    linear_constraints: List[LinearForm]
    objective: LinearForm
    scale_power: int
    bound_exponent: int
    objective_kind: str
    inequality_tags: Tuple[str, ...] = ()

    def num_variables(self) -> int:
        return len(self.variables)


def _dist(q: int, idx: tuple) -> int:
    if q == 2:
        i, j, t = idx
        return i + j - 2 * t
    i, j, t, p = idx
    return i + j - t - p


def _valid_t(n: int, i: int, j: int):
    return range(max(0, i + j - n), min(i, j) + 1)


def canonicalize(q: int, n: int, idx: tuple) -> int:
    """Standalone canonical id lookup (builds a fresh table; see VariableTable)."""
    return VariableTable(q, n).canonicalize(idx)


# ---------------------------------------------------------------------------
# constraint families
# ---------------------------------------------------------------------------


def basic_linear_constraints(q: int, n: int, var: Optional[VariableTable] = None
                             ) -> List[LinearForm]:
    """Nonnegativity, diagonal-domination and pair-sandwich inequalities."""
    var = var or VariableTable(q, n)
    out: List[LinearForm] = []
    seen = set()

    def emit(lf: LinearForm) -> None:
        if lf.is_zero():
            return
        key = lf.key()
        if key in seen:
            return
        seen.add(key)
        out.append(lf)

    x00 = var.pair_id(0)
    for vid, idx in enumerate(var.entries):
        i = idx[0]
        dist = _dist(q, idx)
        diag = var.canonicalize((i, i, i) if q == 2 else (i, i, i, i))
        xd = var.pair_id(dist)
        xi0 = var.pair_id(i)

        lf = LinearForm()
        lf.add_term(vid, ONE)
        emit(lf)  # x >= 0

        if diag != vid:
            lf = LinearForm()
            lf.add_term(diag, ONE)
            lf.add_term(vid, -ONE)
            emit(lf)  # x <= x_{i,i}^{i[,i]}

        if xd != vid:
            lf = LinearForm()
            lf.add_term(xd, ONE)
            lf.add_term(vid, -ONE)
            emit(lf)  # x <= x_{D,0}

        lf = LinearForm()
        lf.add_term(vid, ONE)
        lf.add_term(xi0, -ONE)
        lf.add_term(xd, -ONE)
        lf.add_term(x00, ONE)
        emit(lf)  # x >= x_{i,0} + x_{D,0} - x_{0,0}
    return out


def _binary_block(n: int, k: int, var: VariableTable, entry_form) -> List[List[LinearForm]]:
    """Generic (n-2k+1)-dimensional binary block; entry_form(i, j, t) -> LinearForm."""
    size = n - 2 * k + 1
    rows = []
    for i in range(k, n - k + 1):
        row = []
        for j in range(k, n - k + 1):
            lf = LinearForm()
            for t in _valid_t(n, i, j):
                coef = Fraction(beta_binary(n, i, j, k, t))
                if coef:
                    lf.add(entry_form(i, j, t), coef)
            row.append(lf)
        rows.append(row)
    assert len(rows) == size
    return rows


def _qary_block(q: int, n: int, a: int, k: int, var: VariableTable, entry_form
                ) -> List[List[LinearForm]]:
    """Nonbinary (a,k) block; entry_form(i, j, t, p) -> LinearForm."""
    rows = []
    for i in range(k, n + a - k + 1):
        row = []
        for j in range(k, n + a - k + 1):
            lf = LinearForm()
            for t in _valid_t(n, i, j):
                for p in range(0, t + 1):
                    coef = Fraction(alpha_nonbinary_scaled(q, n, i, j, t, p, a, k))
                    if coef:
                        lf.add(entry_form(i, j, t, p), coef)
            row.append(lf)
        rows.append(row)
    return rows


def _bordered(corner: LinearForm, border: List[LinearForm],
              body: List[List[LinearForm]]) -> List[List[LinearForm]]:
    size = len(body) + 1
    rows = [[corner] + list(border)]
    for i, body_row in enumerate(body):
        rows.append([border[i]] + list(body_row))
    assert all(len(r) == size for r in rows)
    return rows


def psd_blocks(q: int, n: int, var: Optional[VariableTable] = None
               ) -> List[Tuple[str, List[List[LinearForm]]]]:
    """Block-diagonalized PSD constraints on the pair/triple matrices.

    Emits the blocks of the triple matrix itself, the blocks of its
    complement (entries x_{D,0} - x), and the bordered top block coupling
    the complement's diagonal with 1 - x_{0,0}.
    """
    var = var or VariableTable(q, n)
    x00 = var.pair_id(0)
    blocks: List[Tuple[str, List[List[LinearForm]]]] = []

    if q == 2:
        def mprime(i, j, t):
            return var.form((i, j, t))

        def mcompl(i, j, t):
            lf = LinearForm()
            lf.add_term(var.pair_id(i + j - 2 * t), ONE)
            lf.add_term(var.canonicalize((i, j, t)), -ONE)
            return lf

        for k in range(0, n // 2 + 1):
            blocks.append((f"Mprime_k{k}", _binary_block(n, k, var, mprime)))
            body = _binary_block(n, k, var, mcompl)
            if k == 0:
                corner = LinearForm({x00: -ONE}, ONE)  # 1 - x00
                border = []
                for i in range(0, n + 1):
                    y = LinearForm()
                    y.add_term(x00, Fraction(binomial(n, i)))
                    y.add_term(var.pair_id(i), -Fraction(binomial(n, i)))
                    border.append(y)
                blocks.append(("Mcompl_bordered_k0", _bordered(corner, border, body)))
            else:
                blocks.append((f"Mcompl_k{k}", body))
        return blocks

    def mprime_q(i, j, t, p):
        return var.form((i, j, t, p))

    def mcompl_q(i, j, t, p):
        lf = LinearForm()
        lf.add_term(var.pair_id(i + j - t - p), ONE)
        lf.add_term(var.canonicalize((i, j, t, p)), -ONE)
        return lf

    for a, k in block_index_pairs(n):
        label = f"a{a}_k{k}"
        blocks.append((f"Mprime_{label}", _qary_block(q, n, a, k, var, mprime_q)))
        body = _qary_block(q, n, a, k, var, mcompl_q)
        if (a, k) == (0, 0):
            corner = LinearForm({x00: -ONE}, ONE)
            border = []
            for i in range(0, n + 1):
                w = Fraction(binomial(n, i) * (q - 1) ** i)
                y = LinearForm()
                y.add_term(x00, w)
                y.add_term(var.canonicalize((i, i, i, i)), -w)
                border.append(y)
            blocks.append(("Mcompl_bordered_a0_k0", _bordered(corner, border, body)))
        else:
            blocks.append((f"Mcompl_{label}", body))
    return blocks


def _translation_forms(q: int, n: int, ineq: InequalitySet, var: VariableTable
                       ) -> Dict[tuple, LinearForm]:
    """For each orbit index src, the entry of the Lasserre moment matrix:

    sum_d lambda_d sum_dst eta(src -> dst, d) x_dst  -  beta x_{D(src),0}.
    """
    dmax = ineq.max_support()
    forms: Dict[tuple, LinearForm] = {}
    for src in index_set(q, n):
        lf = LinearForm()
        if q == 2:
            for d, lam in enumerate(ineq.lambdas):
                if not lam or d > dmax:
                    continue
                for dst, count in eta_row_binary(n, src, d).items():
                    lf.add_term(var.canonicalize(dst), lam * count)
        else:
            rows = eta_rows_qary(q, n, src, dmax)
            for d in range(dmax + 1):
                lam = ineq.lambdas[d]
                if not lam:
                    continue
                for dst, count in rows[d].items():
                    lf.add_term(var.canonicalize(dst), lam * count)
        lf.add_term(var.pair_id(_dist(q, src)), -ineq.beta)
        forms[src] = lf
    return forms


def lasserre_blocks(q: int, n: int, ineq: InequalitySet,
                    var: Optional[VariableTable] = None
                    ) -> List[Tuple[str, List[List[LinearForm]]]]:
    """Block-diagonalized bordered PSD constraint on the inequality-weighted
    moment matrix (one family per inequality set)."""
    var = var or VariableTable(q, n)
    x00 = var.pair_id(0)
    nform = _translation_forms(q, n, ineq, var)
    tag = ineq.provenance
    blocks: List[Tuple[str, List[List[LinearForm]]]] = []

    if q == 2:
        def entry(i, j, t):
            return nform[(i, j, t)]

        for k in range(0, n // 2 + 1):
            body = _binary_block(n, k, var, entry)
            if k == 0:
                csum = sum(
                    lam * binomial(n, i) for i, lam in enumerate(ineq.lambdas)
                )
                corner = LinearForm({x00: Fraction(csum)}, -ineq.beta)
                border = [
                    nform[(i, i, i)].scaled(Fraction(binomial(n, i)))
                    for i in range(0, n + 1)
                ]
                blocks.append(
                    (f"Lasserre_{tag}_bordered_k0", _bordered(corner, border, body))
                )
            else:
                blocks.append((f"Lasserre_{tag}_k{k}", body))
        return blocks

    def entry_q(i, j, t, p):
        return nform[(i, j, t, p)]

    for a, k in block_index_pairs(n):
        body = _qary_block(q, n, a, k, var, entry_q)
        if (a, k) == (0, 0):
            csum = sum(
                lam * binomial(n, i) * (q - 1) ** i
                for i, lam in enumerate(ineq.lambdas)
            )
            corner = LinearForm({x00: Fraction(csum)}, -ineq.beta)
            border = [
                nform[(i, i, i, i)].scaled(Fraction(binomial(n, i) * (q - 1) ** i))
                for i in range(0, n + 1)
            ]
            blocks.append(
                (f"Lasserre_{tag}_bordered_a0_k0", _bordered(corner, border, body))
            )
        else:
            blocks.append((f"Lasserre_{tag}_a{a}_k{k}", body))
    return blocks


def matrix_cut_constraints(q: int, n: int, ineq: InequalitySet,
                           var: Optional[VariableTable] = None) -> List[LinearForm]:
    """The four matrix-cut linear inequality families, one set per orbit index.

    Emitted for every index of I(q,n) (identical rows deduplicated): distinct
    members of a canonical class yield genuinely different inequalities
    because the first coordinate plays a distinguished role.
    """
    var = var or VariableTable(q, n)
    x00 = var.pair_id(0)
    beta = ineq.beta
    out: List[LinearForm] = []
    seen = set()

    def emit(lf: LinearForm) -> None:
        if lf.is_zero():
            return
        key = lf.key()
        if key not in seen:
            seen.add(key)
            out.append(lf)

    for src in index_set(q, n):
        i = src[0]
        xi0 = var.pair_id(i)
        weights = lambda_weight_table(q, n, ineq, src)
        f1 = LinearForm()
        f2 = LinearForm()
        f3 = LinearForm()
        f4 = LinearForm()
        for dst_pair, lam in weights.items():
            if q == 2:
                jp, tp = dst_pair
                xv = var.canonicalize((i, jp, tp))
                dist = i + jp - 2 * tp
            else:
                jp, tp, pp = dst_pair
                xv = var.canonicalize((i, jp, tp, pp))
                dist = i + jp - tp - pp
            xj0 = var.pair_id(jp)
            xd0 = var.pair_id(dist)
            f1.add_term(xv, lam)
            f2.add_term(xj0, lam)
            f2.add_term(xv, -lam)
            f3.add_term(xd0, lam)
            f3.add_term(xv, -lam)
            f4.add_term(x00, lam)
            f4.add_term(xj0, -lam)
            f4.add_term(xd0, -lam)
            f4.add_term(xv, lam)
        f1.add_term(xi0, -beta)
        f2.add_term(x00, -beta)
        f2.add_term(xi0, beta)
        f3.add_term(x00, -beta)
        f3.add_term(xi0, beta)
        f4.constant -= beta
        f4.add_term(x00, 2 * beta)
        f4.add_term(xi0, -beta)
        for lf in (f1, f2, f3, f4):
            emit(lf)
    return out


def objective_form(q: int, n: int, kind: str,
                   var: Optional[VariableTable] = None) -> LinearForm:
    """Objective (q^n factor omitted): triple, pair or single counting form."""
    var = var or VariableTable(q, n)
    lf = LinearForm()
    if kind == "triple":
        for idx in index_set(q, n):
            if q == 2:
                i, j, t = idx
                coef = Fraction(multinomial(n, (i - t, j - t, t)))
            else:
                i, j, t, p = idx
                coef = Fraction(
                    (q - 1) ** (i + j - t)
                    * (q - 2) ** (t - p)
                    * multinomial(n, (p, t - p, i - t, j - t))
                )
            lf.add_term(var.canonicalize(idx), coef)
    elif kind == "pair":
        for i in range(n + 1):
            idx = (i, i, i) if q == 2 else (i, i, i, i)
            lf.add_term(var.canonicalize(idx), Fraction(binomial(n, i) * (q - 1) ** i))
    elif kind == "single":
        lf.add_term(var.pair_id(0), ONE)
    else:
        raise ValueError(f"unknown objective kind {kind!r}")
    return lf


BOUND_EXPONENT = {"triple": 3, "pair": 2, "single": 1}


def build_sdp(q: int, n: int, r: int, ineqs: Sequence[InequalitySet],
              kind: str = "triple") -> SdpProblem:
    """Assemble the full symmetry-reduced SDP for K_q(n, r)."""
    if kind not in BOUND_EXPONENT:
        raise ValueError(f"unknown objective kind {kind!r}")
    var = VariableTable(q, n)
    blocks = psd_blocks(q, n, var)
    linear = basic_linear_constraints(q, n, var)
    for ineq in ineqs:
        if ineq.n != n:
            raise ValueError("inequality length does not match n")
        blocks.extend(lasserre_blocks(q, n, ineq, var))
        linear.extend(matrix_cut_constraints(q, n, ineq, var))
    return SdpProblem(
        q=q,
        n=n,
        r=r,
        variables=var,
        psd_blocks=blocks,
        linear_constraints=linear,
        objective=objective_form(q, n, kind, var),
        scale_power=n,
        bound_exponent=BOUND_EXPONENT[kind],
        objective_kind=kind,
        inequality_tags=tuple(ineq.provenance for ineq in ineqs),
    )

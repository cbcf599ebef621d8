"""Exact combinatorial coefficients for the Hamming-space orbit calculus.

All functions return exact Python integers (or ``Fraction`` where rational
weights enter).  No floating point is used anywhere in this module.

Orbit indices are plain tuples: ``(i, j, t)`` for the binary alphabet and
``(i, j, t, p)`` for q >= 3, classifying a pair of words relative to the
zero word by their weights ``i, j``, support overlap ``t`` and (nonbinary
only) the number ``p`` of positions where both words carry the same
nonzero symbol.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Tuple

BinaryIndex = Tuple[int, int, int]
QaryIndex = Tuple[int, int, int, int]


def binomial(n: int, k: int) -> int:
    """C(n, k) with the convention that out-of-range arguments give 0."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def multinomial(n: int, parts: Iterable[int]) -> int:
    """n! / (parts[0]! * ... * parts[-1]! * (n - sum(parts))!), else 0."""
    if n < 0:
        return 0
    rest = n
    result = 1
    for part in parts:
        if part < 0 or part > rest:
            return 0
        result *= math.comb(rest, part)
        rest -= part
    return result


def krawtchouk(q: int, n: int, k: int, i: int) -> int:
    """Krawtchouk polynomial P_k(i) for the q-ary Hamming scheme."""
    total = 0
    for s in range(0, k + 1):
        term = binomial(i, s) * binomial(n - i, k - s) * (q - 1) ** (k - s)
        total += -term if s % 2 else term
    return total


def intersection_number(q: int, n: int, k: int, i: int, j: int) -> int:
    """Number of words v with wt(v) = i and d(v, u) = j, for any u of weight k."""
    if q == 2:
        twot = k + i - j
        if twot % 2:
            return 0
        t = twot // 2
        return binomial(k, t) * binomial(n - k, i - t)
    total = 0
    for t in range(0, k + i - j + 1):
        p = k + i - j - t
        coeff = multinomial(k, (t - p, p)) * binomial(n - k, i - t)
        if coeff == 0:
            continue
        total += coeff * (q - 1) ** (i - t) * (q - 2) ** (t - p)
    return total


@lru_cache(maxsize=None)
def beta_binary(n: int, i: int, j: int, k: int, t: int) -> int:
    """Block-diagonalization coefficient of the binary Terwilliger algebra."""
    total = 0
    for u in range(0, n + 1):
        term = (
            binomial(u, t)
            * binomial(n - 2 * k, u - k)
            * binomial(n - k - u, i - u)
            * binomial(n - k - u, j - u)
        )
        if term == 0:
            continue
        total += -term if (t - u) % 2 else term
    return total


@lru_cache(maxsize=None)
def alpha_nonbinary_scaled(
    q: int, n: int, i: int, j: int, t: int, p: int, a: int, k: int
) -> int:
    """Rescaled nonbinary block coefficient.

    Equals the unscaled coefficient times (q-1)^((i+j)/2), which makes the
    value an integer.  The rescaling is a positive diagonal congruence of
    every block and preserves positive semidefiniteness.
    """
    beta = beta_binary(n - a, i - a, j - a, k - a, t - a)
    if beta == 0:
        return 0
    inner = 0
    for g in range(0, p + 1):
        term = binomial(a, g) * binomial(t - a, p - g)
        if term == 0:
            continue
        term *= (q - 2) ** (t - a - p + g)
        inner += -term if (a - g) % 2 else term
    return beta * (q - 1) ** (i + j - t) * inner


def in_index_set(q: int, n: int, idx: tuple) -> bool:
    """Membership test for I(2,n) (triples) or I(q,n) (quadruples)."""
    if q == 2:
        i, j, t = idx
        return 0 <= t <= min(i, j) and i + j <= n + t and max(i, j) <= n
    i, j, t, p = idx
    return 0 <= p <= t <= min(i, j) and i + j <= n + t and max(i, j) <= n


def index_set(q: int, n: int) -> list:
    """All orbit indices of I(q,n) in lexicographic order."""
    out = []
    if q == 2:
        for i in range(n + 1):
            for j in range(n + 1):
                for t in range(max(0, i + j - n), min(i, j) + 1):
                    out.append((i, j, t))
        return out
    for i in range(n + 1):
        for j in range(n + 1):
            for t in range(max(0, i + j - n), min(i, j) + 1):
                for p in range(0, t + 1):
                    out.append((i, j, t, p))
    return out


# ---------------------------------------------------------------------------
# eta / alpha4 counts (binary)
# ---------------------------------------------------------------------------


def eta_binary(n: int, src: BinaryIndex, dst: BinaryIndex, d: int) -> int:
    """Number of weight-d words w moving pair class src to dst by translation.

    Counts w with ``class(u - w, v - w) = dst`` for a fixed pair (u, v) of
    class ``src``.  Zero when the Hamming distance i + j - 2t differs
    between the classes (translation preserves it).
    """
    i, j, t = src
    ip, jp, tp = dst
    if i + j - 2 * t != ip + jp - 2 * tp:
        return 0
    # a01 - a10 and a00 - a11 are forced by the weight changes.
    diff = (ip - i) - (jp - j)
    if diff % 2:
        return 0
    half = diff // 2  # a01 - a10
    total = 0
    for a10 in range(0, i - t + 1):
        a01 = a10 + half
        if a01 < 0 or a01 > j - t:
            continue
        for a11 in range(0, t + 1):
            a00 = d - a01 - a10 - a11
            if a00 < 0 or a00 > n + t - i - j:
                continue
            if ip != i + a00 - a11 - a10 + a01:
                continue
            total += (
                binomial(i - t, a10)
                * binomial(j - t, a01)
                * binomial(t, a11)
                * binomial(n + t - i - j, a00)
            )
    return total


def eta_row_binary(n: int, src: BinaryIndex, d: int) -> Dict[BinaryIndex, int]:
    """All nonzero eta_binary(n, src, dst, d) at once, keyed by dst."""
    i, j, t = src
    row: Dict[BinaryIndex, int] = {}
    for a10 in range(0, min(i - t, d) + 1):
        b10 = binomial(i - t, a10)
        for a01 in range(0, min(j - t, d - a10) + 1):
            b01 = b10 * binomial(j - t, a01)
            for a11 in range(0, min(t, d - a10 - a01) + 1):
                a00 = d - a10 - a01 - a11
                if a00 > n + t - i - j:
                    continue
                count = b01 * binomial(t, a11) * binomial(n + t - i - j, a00)
                ip = i + a00 - a11 - a10 + a01
                jp = j + a00 - a11 + a10 - a01
                tp = (ip + jp - (i + j - 2 * t)) // 2
                dst = (ip, jp, tp)
                row[dst] = row.get(dst, 0) + count
    return row


def alpha4_binary(n: int, src: BinaryIndex, jp: int, tp: int, d: int) -> int:
    """Count of w with class(u, w) = (i, jp, tp) and d(v, w) = d.

    (u, v) is any fixed pair of class ``src``.
    """
    i, j, t = src
    total = 0
    for a10 in range(0, min(i - t, tp) + 1):
        a11 = tp - a10
        if a11 < 0 or a11 > t:
            continue
        # a00 + a01 = jp - tp and a00 - a01 = d - j - a10 + a11
        s = jp - tp
        diff = d - j - a10 + a11
        if (s + diff) % 2:
            continue
        a00 = (s + diff) // 2
        a01 = s - a00
        if a00 < 0 or a00 > n + t - i - j or a01 < 0 or a01 > j - t:
            continue
        total += (
            binomial(i - t, a10)
            * binomial(j - t, a01)
            * binomial(t, a11)
            * binomial(n + t - i - j, a00)
        )
    return total


# ---------------------------------------------------------------------------
# eta / alpha4 counts (q >= 3)
# ---------------------------------------------------------------------------

# Support profile of a translating word w relative to a pair (u, v):
#   a1/a2: positions with u != 0, v = 0 and w = u / w not in {0, u}
#   b1/b2: positions with u = 0, v != 0 and w = v / w not in {0, v}
#   c1/c2: positions with u = v != 0 and w = u / w not in {0, u}
#   d1/d2/d3: positions with 0 != u != v != 0 and w = u / w = v / w fresh
#   e: positions with u = v = 0 and w != 0


def _qary_profiles(q: int, n: int, src: QaryIndex, wmax: int):
    """Yield (a1,a2,b1,b2,c1,c2,d1,d2,d3,e, ways) over all support profiles
    of words w with wt(w) <= wmax relative to a fixed pair of class src."""
    i, j, t, p = src
    na, nb, nc, nd, ne = i - t, j - t, p, t - p, n + t - i - j
    q1, q2, q3 = q - 1, q - 2, q - 3
    for a1 in range(min(na, wmax) + 1):
        wa1 = binomial(na, a1)
        for a2 in range(min(na - a1, wmax - a1) + 1):
            wa = wa1 * binomial(na - a1, a2) * q2**a2
            if wa == 0:
                continue
            ra = wmax - a1 - a2
            for b1 in range(min(nb, ra) + 1):
                wb1 = wa * binomial(nb, b1)
                for b2 in range(min(nb - b1, ra - b1) + 1):
                    wb = wb1 * binomial(nb - b1, b2) * q2**b2
                    if wb == 0:
                        continue
                    rb = ra - b1 - b2
                    for c1 in range(min(nc, rb) + 1):
                        wc1 = wb * binomial(nc, c1)
                        for c2 in range(min(nc - c1, rb - c1) + 1):
                            wc = wc1 * binomial(nc - c1, c2) * q2**c2
                            if wc == 0:
                                continue
                            rc = rb - c1 - c2
                            for d1 in range(min(nd, rc) + 1):
                                wd1 = wc * binomial(nd, d1)
                                for d2 in range(min(nd - d1, rc - d1) + 1):
                                    wd2 = wd1 * binomial(nd - d1, d2)
                                    for d3 in range(min(nd - d1 - d2, rc - d1 - d2) + 1):
                                        wd = wd2 * binomial(nd - d1 - d2, d3) * q3**d3
                                        if wd == 0:
                                            continue
                                        rd = rc - d1 - d2 - d3
                                        for e in range(min(ne, rd) + 1):
                                            ways = wd * binomial(ne, e) * q1**e
                                            if ways:
                                                yield (a1, a2, b1, b2, c1, c2,
                                                       d1, d2, d3, e, ways)


def eta_rows_qary(
    q: int, n: int, src: QaryIndex, dmax: int
) -> Dict[int, Dict[QaryIndex, int]]:
    """eta counts for all translating words of weight d <= dmax.

    Returns ``{d: {dst: count}}`` where dst = class(u - w, v - w).
    """
    i, j, t, p = src
    rows: Dict[int, Dict[QaryIndex, int]] = {d: {} for d in range(dmax + 1)}
    for a1, a2, b1, b2, c1, c2, d1, d2, d3, e, ways in _qary_profiles(q, n, src, dmax):
        d = a1 + a2 + b1 + b2 + c1 + c2 + d1 + d2 + d3 + e
        ip = i - a1 + b1 + b2 - c1 - d1 + e
        jp = j + a1 + a2 - b1 - c1 - d2 + e
        tp = t + a2 + b2 - c1 - d1 - d2 + e
        pp = ip + jp - tp - (i + j - t - p)
        dst = (ip, jp, tp, pp)
        bucket = rows[d]
        bucket[dst] = bucket.get(dst, 0) + ways
    return rows


def eta_qary(q: int, n: int, src: QaryIndex, dst: QaryIndex, d: int) -> int:
    """Single eta count for q >= 3; zero unless i+j-t-p is preserved."""
    i, j, t, p = src
    ip, jp, tp, pp = dst
    if i + j - t - p != ip + jp - tp - pp:
        return 0
    total = 0
    for a1, a2, b1, b2, c1, c2, d1, d2, d3, e, ways in _qary_profiles(q, n, src, d):
        if a1 + a2 + b1 + b2 + c1 + c2 + d1 + d2 + d3 + e != d:
            continue
        if ip != i - a1 + b1 + b2 - c1 - d1 + e:
            continue
        if jp != j + a1 + a2 - b1 - c1 - d2 + e:
            continue
        if tp != t + a2 + b2 - c1 - d1 - d2 + e:
            continue
        total += ways
    return total


def _alpha4_profiles_qary(q: int, n: int, src: QaryIndex, dmax: int):
    """Yield (jp, tp, pp, d, ways) over words w with d(v, w) = d <= dmax,
    where (jp, tp, pp) is the class of (u, w) and (u, v) has class src.

    The profile variables mirror the eta case, but now classify supp(w).
    ``d`` counts the a/e positions plus the supp(v) positions where w
    deviates from v, so every deviation budget is bounded by dmax.
    """
    i, j, t, p = src
    na, nb, nc, nd, ne = i - t, j - t, p, t - p, n + t - i - j
    q1, q2, q3 = q - 1, q - 2, q - 3
    for a1 in range(min(na, dmax) + 1):
        wa1 = binomial(na, a1)
        for a2 in range(min(na - a1, dmax - a1) + 1):
            wa = wa1 * binomial(na - a1, a2) * q2**a2
            if wa == 0:
                continue
            for e in range(min(ne, dmax - a1 - a2) + 1):
                we = wa * binomial(ne, e) * q1**e
                budget = dmax - a1 - a2 - e  # remaining deviations inside supp(v)
                # deficits: fb = (j-t) - b1, fc = p - c1, fd = (t-p) - d2
                for fb in range(min(nb, budget) + 1):
                    b1 = nb - fb
                    wfb = we * binomial(nb, b1)
                    for fc in range(min(nc, budget - fb) + 1):
                        c1 = nc - fc
                        wfc = wfb * binomial(nc, c1)
                        for fd in range(min(nd, budget - fb - fc) + 1):
                            d2 = nd - fd
                            wfd = wfc * binomial(nd, d2)
                            d = a1 + a2 + e + fb + fc + fd
                            for b2 in range(fb + 1):
                                wb2 = wfd * binomial(fb, b2) * q2**b2
                                if wb2 == 0:
                                    continue
                                for c2 in range(fc + 1):
                                    wc2 = wb2 * binomial(fc, c2) * q2**c2
                                    if wc2 == 0:
                                        continue
                                    for d1 in range(fd + 1):
                                        wd1 = wc2 * binomial(fd, d1)
                                        for d3 in range(fd - d1 + 1):
                                            ways = wd1 * binomial(fd - d1, d3) * q3**d3
                                            if ways == 0:
                                                continue
                                            jp = (a1 + a2 + b1 + b2 + c1 + c2
                                                  + d1 + d2 + d3 + e)
                                            tp = a1 + a2 + c1 + c2 + d1 + d2 + d3
                                            pp = a1 + c1 + d1
                                            yield jp, tp, pp, d, ways


def alpha4_rows_qary(
    q: int, n: int, src: QaryIndex, dmax: int
) -> Dict[int, Dict[Tuple[int, int, int], int]]:
    """alpha4 counts for all d <= dmax: ``{d: {(jp, tp, pp): count}}``."""
    rows: Dict[int, Dict[Tuple[int, int, int], int]] = {
        d: {} for d in range(dmax + 1)
    }
    for jp, tp, pp, d, ways in _alpha4_profiles_qary(q, n, src, dmax):
        bucket = rows[d]
        key = (jp, tp, pp)
        bucket[key] = bucket.get(key, 0) + ways
    return rows


def alpha4_qary(
    q: int, n: int, src: QaryIndex, jp: int, tp: int, pp: int, d: int
) -> int:
    """Count of w with class(u, w) = (i, jp, tp, pp) and d(v, w) = d."""
    total = 0
    for jpx, tpx, ppx, dx, ways in _alpha4_profiles_qary(q, n, src, d):
        if dx == d and (jpx, tpx, ppx) == (jp, tp, pp):
            total += ways
    return total


# ---------------------------------------------------------------------------
# lambda-weighted alpha4 sums
# ---------------------------------------------------------------------------


def lambda_weighted(q, n, ineq, src, dst_pair) -> Fraction:
    """Sum over d of lambda_d * alpha4(q, n, src, dst_pair, d)."""
    lambdas = ineq.lambdas
    total = Fraction(0)
    if q == 2:
        jp, tp = dst_pair
        for d, lam in enumerate(lambdas):
            if lam:
                total += lam * alpha4_binary(n, src, jp, tp, d)
    else:
        jp, tp, pp = dst_pair
        for d, lam in enumerate(lambdas):
            if lam:
                total += lam * alpha4_qary(q, n, src, jp, tp, pp, d)
    return total


def lambda_weight_table(q, n, ineq, src) -> Dict[tuple, Fraction]:
    """All nonzero lambda-weighted alpha4 sums for a source class at once."""
    lambdas = ineq.lambdas
    dmax = max((d for d, lam in enumerate(lambdas) if lam), default=0)
    table: Dict[tuple, Fraction] = {}
    if q == 2:
        i, j, t = src
        for jp in range(n + 1):
            for tp in range(max(0, i + jp - n), min(i, jp) + 1):
                total = Fraction(0)
                for d in range(dmax + 1):
                    lam = lambdas[d]
                    if lam:
                        total += lam * alpha4_binary(n, src, jp, tp, d)
                if total:
                    table[(jp, tp)] = total
        return table
    rows = alpha4_rows_qary(q, n, src, dmax)
    for d in range(dmax + 1):
        lam = lambdas[d]
        if not lam:
            continue
        for key, count in rows[d].items():
            table[key] = table.get(key, Fraction(0)) + lam * count
    return table


# ---------------------------------------------------------------------------
# debug dump
# ---------------------------------------------------------------------------


def dump_coefficients(q: int, n: int) -> str:
    """One line per coefficient: ``kind params... = value`` (deterministic)."""
    lines: List[str] = []
    for k in range(n + 1):
        for i in range(n + 1):
            lines.append(f"krawtchouk {q} {n} {k} {i} = {krawtchouk(q, n, k, i)}")
    for k in range(n + 1):
        for i in range(n + 1):
            for j in range(n + 1):
                lines.append(
                    f"intersection {q} {n} {k} {i} {j} = "
                    f"{intersection_number(q, n, k, i, j)}"
                )
    if q == 2:
        for i in range(n + 1):
            for j in range(n + 1):
                for k in range(n // 2 + 1):
                    for t in range(n + 1):
                        lines.append(
                            f"betaBinary {n} {i} {j} {k} {t} = "
                            f"{beta_binary(n, i, j, k, t)}"
                        )
    else:
        for a in range(n + 1):
            for k in range(a, n + 1):
                if k > n + a - k:
                    continue
                for i in range(k, n + a - k + 1):
                    for j in range(k, n + a - k + 1):
                        for t in range(n + 1):
                            for p in range(t + 1):
                                val = alpha_nonbinary_scaled(q, n, i, j, t, p, a, k)
                                if val:
                                    lines.append(
                                        f"alphaNonbinary {q} {n} {i} {j} {t} {p} "
                                        f"{a} {k} = {val}"
                                    )
    return "\n".join(lines) + "\n"


def k_max(n: int, a: int) -> int:
    """Largest k with a <= k <= n + a - k."""
    return (n + a) // 2


def block_index_pairs(n: int) -> List[Tuple[int, int]]:
    """All (a, k) with 0 <= a <= k <= n + a - k, in lexicographic order."""
    return [(a, k) for a in range(n + 1) for k in range(a, k_max(n, a) + 1)]

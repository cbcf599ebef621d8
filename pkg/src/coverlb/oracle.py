"""Brute-force ground truth on small Hamming spaces.

Everything here enumerates words explicitly, so it is only usable at desk
scale (q^n <= 4096 for counting, q^n <= 1024 for eigenvalue checks); the
caps are hard errors.  These routines exist to validate the closed-form
coefficients and the assembled SDPs against reality.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .combinat import binomial, in_index_set, index_set, multinomial
from .inequalities import InequalitySet
from .sdpmodel import VariableTable

COUNT_CAP = 4096
EIGEN_CAP = 1024

Word = Tuple[int, ...]


def _check_cap(q: int, n: int, cap: int) -> None:
    if q**n > cap:
        raise ValueError(f"q^n = {q ** n} exceeds the desk-scale cap {cap}")


def all_words(q: int, n: int) -> List[Word]:
    return list(itertools.product(range(q), repeat=n))


def hamming_distance(u: Word, v: Word) -> int:
    return sum(a != b for a, b in zip(u, v))


def weight(u: Word) -> int:
    return sum(a != 0 for a in u)


def subtract(u: Word, v: Word, q: int) -> Word:
    return tuple((a - b) % q for a, b in zip(u, v))


def pair_class(q: int, u: Word, v: Word) -> tuple:
    """Orbit index of the pair (u, v) relative to the zero word."""
    i = weight(u)
    j = weight(v)
    t = sum(a != 0 and b != 0 for a, b in zip(u, v))
    if q == 2:
        return (i, j, t)
    p = sum(a != 0 and a == b for a, b in zip(u, v))
    return (i, j, t, p)


def representative_pair(q: int, n: int, src: tuple) -> Tuple[Word, Word]:
    """Positional canonical pair (u, v) of class src.

    u = 1^i 0^(n-i); v places its equal, overlapping and fresh nonzero
    symbols in the leftmost available positions.
    """
    if not in_index_set(q, n, src):
        raise ValueError(f"{src} is not realizable in I({q},{n})")
    if q == 2:
        i, j, t = src
        p = t
    else:
        i, j, t, p = src
        if t > p and q < 3:
            raise ValueError("t > p requires q >= 3")
    u = [1] * i + [0] * (n - i)
    v = [0] * n
    for pos in range(p):
        v[pos] = 1
    for pos in range(p, t):
        v[pos] = 2
    for pos in range(i, i + (j - t)):
        v[pos] = 1
    return tuple(u), tuple(v)


# ---------------------------------------------------------------------------
# brute-force coefficient counts
# ---------------------------------------------------------------------------


def eta_table_bruteforce(q: int, n: int, src: tuple) -> Dict[Tuple[int, tuple], int]:
    """{(d, dst): count} over all translating words w, for a fixed src pair."""
    _check_cap(q, n, COUNT_CAP)
    u, v = representative_pair(q, n, src)
    table: Dict[Tuple[int, tuple], int] = {}
    for w in itertools.product(range(q), repeat=n):
        d = weight(w)
        dst = pair_class(q, subtract(u, w, q), subtract(v, w, q))
        key = (d, dst)
        table[key] = table.get(key, 0) + 1
    return table


def count_eta_bruteforce(q: int, n: int, src: tuple, dst: tuple, d: int) -> int:
    _check_cap(q, n, COUNT_CAP)
    u, v = representative_pair(q, n, src)
    count = 0
    for w in itertools.product(range(q), repeat=n):
        if weight(w) != d:
            continue
        if pair_class(q, subtract(u, w, q), subtract(v, w, q)) == dst:
            count += 1
    return count


def alpha4_table_bruteforce(q: int, n: int, src: tuple) -> Dict[tuple, int]:
    """{(jp, tp[, pp], d): count} over all words w, for a fixed src pair."""
    _check_cap(q, n, COUNT_CAP)
    u, v = representative_pair(q, n, src)
    table: Dict[tuple, int] = {}
    for w in itertools.product(range(q), repeat=n):
        cls = pair_class(q, u, w)
        d = hamming_distance(v, w)
        key = cls[1:] + (d,)
        table[key] = table.get(key, 0) + 1
    return table


def count_alpha4_bruteforce(q: int, n: int, src: tuple, jp: int, tp: int,
                            pp: Optional[int] = None, d: int = 0) -> int:
    _check_cap(q, n, COUNT_CAP)
    u, v = representative_pair(q, n, src)
    want = (jp, tp) if q == 2 else (jp, tp, pp)
    count = 0
    for w in itertools.product(range(q), repeat=n):
        if hamming_distance(v, w) != d:
            continue
        if pair_class(q, u, w)[1:] == want:
            count += 1
    return count


# ---------------------------------------------------------------------------
# explicit codes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CodeWitness:
    q: int
    n: int
    words: frozenset

    def __post_init__(self):
        if not self.words:
            raise ValueError("code must be nonempty")
        for w in self.words:
            if len(w) != self.n or any(not 0 <= a < self.q for a in w):
                raise ValueError(f"word {w} invalid for q={self.q}, n={self.n}")

    @classmethod
    def from_words(cls, q: int, n: int, words: Iterable[Word]) -> "CodeWitness":
        return cls(q, n, frozenset(tuple(w) for w in words))

    @classmethod
    def whole_space(cls, q: int, n: int) -> "CodeWitness":
        return cls.from_words(q, n, all_words(q, n))

    @classmethod
    def parse(cls, text: str) -> "CodeWitness":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        q, n = (int(tok) for tok in lines[0].split())
        words = [tuple(int(ch) for ch in ln) for ln in lines[1:]]
        return cls.from_words(q, n, words)


def hamming_code_7() -> CodeWitness:
    """The 16-word [7,4] Hamming code (perfect, covering radius 1)."""
    gens = [
        (1, 0, 0, 0, 0, 1, 1),
        (0, 1, 0, 0, 1, 0, 1),
        (0, 0, 1, 0, 1, 1, 0),
        (0, 0, 0, 1, 1, 1, 1),
    ]
    words = set()
    for bits in itertools.product((0, 1), repeat=4):
        w = tuple(
            sum(b * g[pos] for b, g in zip(bits, gens)) % 2 for pos in range(7)
        )
        words.add(w)
    return CodeWitness.from_words(2, 7, words)


def covering_radius(code: CodeWitness) -> int:
    _check_cap(code.q, code.n, COUNT_CAP)
    words = list(code.words)
    radius = 0
    for u in itertools.product(range(code.q), repeat=code.n):
        best = min(hamming_distance(u, c) for c in words)
        radius = max(radius, best)
    return radius


def orbit_size(q: int, n: int, idx: tuple) -> int:
    """Number of pairs (v, w) with class(v, w) = idx, i.e. nonzeros of the
    orbit basis matrix."""
    if q == 2:
        i, j, t = idx
        return multinomial(n, (i - t, j - t, t))
    i, j, t, p = idx
    return (
        (q - 1) ** (i + j - t)
        * (q - 2) ** (t - p)
        * multinomial(n, (p, t - p, i - t, j - t))
    )


def witness_x(code: CodeWitness) -> List[Fraction]:
    """Variable assignment induced by an explicit code via triple counting.

    Returns a vector indexed by the canonical variable ids of
    VariableTable(q, n): x = |triples in class| / (q^n * orbit size).
    """
    q, n = code.q, code.n
    _check_cap(q, n, COUNT_CAP)
    var = VariableTable(q, n)
    counts = [0] * len(var)
    words = list(code.words)
    for u in words:
        for v in words:
            du = subtract(v, u, q)
            for w in words:
                cls = pair_class(q, du, subtract(w, u, q))
                counts[var.canonicalize(cls)] += 1
    out = []
    for vid in range(len(var)):
        # counts were accumulated over the whole class, so divide by the
        # total number of pairs across all index tuples in the class.
        total_gamma = sum(
            orbit_size(q, n, idx)
            for idx in index_set(q, n)
            if var.canonicalize(idx) == vid
        )
        out.append(Fraction(counts[vid], q**n * total_gamma))
    return out


def code_distance_counts(code: CodeWitness, u: Word) -> List[int]:
    """A_i(u) = number of codewords at distance exactly i from u."""
    counts = [0] * (code.n + 1)
    for c in code.words:
        counts[hamming_distance(u, c)] += 1
    return counts


def verify_inequality_on_code(code: CodeWitness, ineq: InequalitySet) -> Fraction:
    """Worst slack of sum_i lambda_i A_i(u) - beta over all u (>= 0 iff valid)."""
    _check_cap(code.q, code.n, COUNT_CAP)
    worst = None
    for u in itertools.product(range(code.q), repeat=code.n):
        counts = code_distance_counts(code, u)
        slack = sum(lam * c for lam, c in zip(ineq.lambdas, counts)) - ineq.beta
        if worst is None or slack < worst:
            worst = slack
    return worst


# ---------------------------------------------------------------------------
# block-map verification
# ---------------------------------------------------------------------------


def basis_matrices(q: int, n: int) -> Dict[tuple, np.ndarray]:
    """Dense 0/1 orbit basis matrices of the zero-stabilizer algebra."""
    _check_cap(q, n, EIGEN_CAP)
    words = all_words(q, n)
    size = len(words)
    mats = {idx: np.zeros((size, size)) for idx in index_set(q, n)}
    for a, u in enumerate(words):
        for b, v in enumerate(words):
            mats[pair_class(q, u, v)][a, b] = 1.0
    return mats


def _block_map_binary(n: int, coeffs: Dict[tuple, float]) -> List[np.ndarray]:
    from .combinat import beta_binary

    blocks = []
    for k in range(0, n // 2 + 1):
        dim = n - 2 * k + 1
        block = np.zeros((dim, dim))
        for bi, i in enumerate(range(k, n - k + 1)):
            for bj, j in enumerate(range(k, n - k + 1)):
                norm = 1.0 / math.sqrt(
                    binomial(n - 2 * k, i - k) * binomial(n - 2 * k, j - k)
                )
                total = 0.0
                for t in range(max(0, i + j - n), min(i, j) + 1):
                    total += beta_binary(n, i, j, k, t) * coeffs.get((i, j, t), 0.0)
                block[bi, bj] = norm * total
        blocks.append(block)
    return blocks


def _block_map_qary(q: int, n: int, coeffs: Dict[tuple, float]) -> List[np.ndarray]:
    from .combinat import alpha_nonbinary_scaled, block_index_pairs

    blocks = []
    for a, k in block_index_pairs(n):
        dim = n + a - 2 * k + 1
        block = np.zeros((dim, dim))
        for bi, i in enumerate(range(k, n + a - k + 1)):
            for bj, j in enumerate(range(k, n + a - k + 1)):
                norm = 1.0 / math.sqrt(
                    binomial(n + a - 2 * k, i - k) * binomial(n + a - 2 * k, j - k)
                )
                # undo the (q-1)^((i+j)/2) rescaling of the stored coefficients
                norm /= math.sqrt(float((q - 1) ** (i + j)))
                total = 0.0
                for t in range(max(0, i + j - n), min(i, j) + 1):
                    for p in range(0, t + 1):
                        total += alpha_nonbinary_scaled(
                            q, n, i, j, t, p, a, k
                        ) * coeffs.get((i, j, t, p), 0.0)
                block[bi, bj] = norm * total
        blocks.append(block)
    return blocks


def block_map(q: int, n: int, coeffs: Dict[tuple, float]) -> List[np.ndarray]:
    """Normalized block-diagonalization image of sum coeffs[idx] * M_idx."""
    if q == 2:
        return _block_map_binary(n, coeffs)
    return _block_map_qary(q, n, coeffs)


def _extract_coeffs(q: int, n: int, mat: np.ndarray) -> Dict[tuple, float]:
    words = all_words(q, n)
    pos = {w: a for a, w in enumerate(words)}
    out = {}
    for idx in index_set(q, n):
        u, v = representative_pair(q, n, idx)
        out[idx] = float(mat[pos[u], pos[v]])
    return out


@dataclass
class BlockMapReport:
    homomorphism_error: float
    psd_sign_agreements: int
    psd_trials: int
    border_error: float
    identity_error: float
    passed: bool


def verify_block_map(q: int, n: int, trials: int = 20, tolerance: float = 1e-8,
                     seed: int = 0) -> BlockMapReport:
    """Numerically verify the block map is a homomorphism that preserves
    positive semidefiniteness and sends sphere outer products to the top
    block's rank-1 entries."""
    _check_cap(q, n, EIGEN_CAP)
    rng = np.random.default_rng(seed)
    mats = basis_matrices(q, n)
    indices = index_set(q, n)

    hom_err = 0.0
    for _ in range(trials):
        x = {idx: rng.uniform(-1, 1) for idx in indices}
        y = {idx: rng.uniform(-1, 1) for idx in indices}
        A = sum(x[idx] * mats[idx] for idx in indices)
        B = sum(y[idx] * mats[idx] for idx in indices)
        AB = A @ B
        phiA = block_map(q, n, x)
        phiB = block_map(q, n, y)
        phiAB = block_map(q, n, _extract_coeffs(q, n, AB))
        for pa, pb, pab in zip(phiA, phiB, phiAB):
            hom_err = max(hom_err, np.max(np.abs(pa @ pb - pab)))

    agreements = 0
    for trial in range(trials):
        x = {}
        for idx in indices:
            mirror = (idx[1], idx[0]) + idx[2:]
            if mirror in x:
                x[idx] = x[mirror]
            else:
                x[idx] = rng.uniform(-1, 1)
        A = sum(x[idx] * mats[idx] for idx in indices)
        full_min = float(np.linalg.eigvalsh(A).min())
        block_min = min(
            float(np.linalg.eigvalsh(b).min()) for b in block_map(q, n, x)
        )
        scale = max(1.0, abs(full_min), abs(block_min))
        if abs(full_min - block_min) <= 1e-6 * scale or (
            (full_min >= -tolerance) == (block_min >= -tolerance)
        ):
            agreements += 1

    # border lemma: image of 1_{S_i} 1_{S_j}^T
    border_err = 0.0
    for i in range(n + 1):
        for j in range(n + 1):
            coeffs = {}
            for idx in indices:
                if idx[0] == i and idx[1] == j:
                    coeffs[idx] = 1.0
            blocks = block_map(q, n, coeffs)
            expect = math.sqrt(float(binomial(n, i) * binomial(n, j)))
            if q != 2:
                expect *= math.sqrt(float((q - 1) ** (i + j)))
            top = blocks[0]
            for bi in range(top.shape[0]):
                for bj in range(top.shape[1]):
                    want = expect if (bi == i and bj == j) else 0.0
                    border_err = max(border_err, abs(top[bi, bj] - want))
            for blk in blocks[1:]:
                border_err = max(border_err, float(np.max(np.abs(blk))))

    # identity maps to identity in every block
    ident_coeffs = {}
    for idx in indices:
        i = idx[0]
        diag = (i, i, i) if q == 2 else (i, i, i, i)
        ident_coeffs[idx] = 1.0 if idx == diag else 0.0
    ident_err = 0.0
    for blk in block_map(q, n, ident_coeffs):
        ident_err = max(
            ident_err, float(np.max(np.abs(blk - np.eye(blk.shape[0]))))
        )

    scale = max(1.0, float(q**n))
    passed = (
        hom_err <= tolerance * scale
        and agreements == trials
        and border_err <= tolerance * scale
        and ident_err <= tolerance
    )
    return BlockMapReport(
        homomorphism_error=hom_err,
        psd_sign_agreements=agreements,
        psd_trials=trials,
        border_error=border_err,
        identity_error=ident_err,
        passed=passed,
    )

"""Command-line front end: single bounds, batch tables, verification suites."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

from . import combinat, oracle
from .inequalities import (
    InequalitySet,
    default_inequalities,
    parse_inequality_file,
    plain_lower_bound,
    sphere_covering,
    van_wee,
)
from .lpbound import build_lp, solve_lp_exact
from .sdpmodel import build_sdp
from .solverio import (
    STATUS_NEAR,
    STATUS_OPTIMAL,
    finalize_bound,
    invoke_solver,
    write_sdpa_sparse,
)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_BAD_FLAGS = 2
EXIT_SOLVER_FAIL = 3


class CliError(Exception):
    """Invalid flag combination or argument value (exit code 2)."""


def _resolve_inequalities(spec: Optional[str], q: int, n: int, r: int
                          ) -> List[InequalitySet]:
    if not spec:
        return default_inequalities(q, n, r)
    out: List[InequalitySet] = []
    for token in spec.split(","):
        token = token.strip()
        if token == "sphere":
            out.append(sphere_covering(q, n, r))
        elif token == "vanwee":
            if q != 2:
                raise CliError("vanwee inequalities are binary only")
            out.append(van_wee(n, r))
        elif token.startswith("file:"):
            path = token[len("file:"):]
            try:
                with open(path) as fh:
                    fq, fn, ineq = parse_inequality_file(fh.read())
            except (OSError, ValueError) as exc:
                raise CliError(f"cannot read inequality file {path}: {exc}")
            if (fq, fn) != (q, n):
                raise CliError(
                    f"inequality file is for q={fq}, n={fn}, not q={q}, n={n}"
                )
            out.append(ineq)
        else:
            raise CliError(f"unknown inequality selector {token!r}")
    return out


# ---------------------------------------------------------------------------
# bound
# ---------------------------------------------------------------------------


def cmd_bound(args) -> int:
    try:
        ineqs = _resolve_inequalities(args.ineq, args.q, args.n, args.r)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FLAGS

    problem = build_sdp(args.q, args.n, args.r, ineqs, args.objective)
    out_path = args.out or f"kq{args.q}_n{args.n}_r{args.r}.dat-s"
    write_sdpa_sparse(problem, out_path, args.digits)

    if args.no_solve:
        doc = {
            "schemaVersion": 1,
            "q": args.q,
            "n": args.n,
            "r": args.r,
            "inequalities": list(problem.inequality_tags),
            "objectiveKind": args.objective,
            "problemFile": out_path,
            "status": "notSolved",
        }
        print(json.dumps(doc, indent=2))
        return EXIT_OK

    report = invoke_solver(
        out_path, args.solver, args.param, timeout=args.timeout
    )
    if report.status not in (STATUS_OPTIMAL, STATUS_NEAR):
        print(
            f"error: solver failed ({report.status}): {report.message}",
            file=sys.stderr,
        )
        return EXIT_SOLVER_FAIL
    result = finalize_bound(report, problem, Decimal(str(args.margin)))
    print(json.dumps(result.to_document(problem.inequality_tags), indent=2))
    return EXIT_OK


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------


def load_known_bounds(path: Optional[str] = None) -> Dict[Tuple[int, int, int], dict]:
    """Known lower/upper bound fixtures, keyed by (q, n, r)."""
    if path:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            rows = list(reader)
    else:
        text = (
            resources.files("coverlb")
            .joinpath("fixtures/known_bounds.csv")
            .read_text()
        )
        rows = list(csv.DictReader(io.StringIO(text)))
    table = {}
    for row in rows:
        key = (int(row["q"]), int(row["n"]), int(row["r"]))
        if key in table:
            raise ValueError(f"duplicate fixture row for {key}")
        entry = {
            "lower": int(row["lower"]),
            "upper": int(row["upper"]),
            "source": row.get("source", ""),
        }
        if entry["lower"] > entry["upper"]:
            raise ValueError(f"fixture row {key} has lower > upper")
        table[key] = entry
    return table


def _parse_range(text: str) -> List[int]:
    out: List[int] = []
    for piece in text.split(","):
        piece = piece.strip()
        if "-" in piece[1:]:
            lo, hi = piece.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(piece))
    return out


def _flag(bound: int, known: Optional[dict]) -> str:
    if known is None:
        return ""
    if bound > known["upper"]:
        return "UNSOUND"
    if bound > known["lower"]:
        return "improve"
    if bound == known["lower"]:
        return "match"
    return "below"


def cmd_table(args) -> int:
    try:
        qs = _parse_range(args.q)
        ns = _parse_range(args.n)
        rs = _parse_range(args.r)
        known = load_known_bounds(args.fixtures)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FLAGS

    writer = csv.writer(sys.stdout if not args.out else open(args.out, "w", newline=""))
    writer.writerow(
        ["q", "n", "r", "method", "objective", "rawValue", "rootValue",
         "bound", "knownLower", "knownUpper", "flag", "wallTime"]
    )
    failures: List[str] = []
    unsound = False
    workdir = tempfile.mkdtemp(prefix="coverlb_table_")
    for q in qs:
        for n in ns:
            for r in rs:
                if r >= n:
                    continue
                start = time.monotonic()
                try:
                    ineqs = _resolve_inequalities(args.ineq, q, n, r)
                    if args.method == "lp":
                        optimum, _ = solve_lp_exact(build_lp(q, n, ineqs[0]))
                        raw = optimum
                        root = optimum
                        bound = math.ceil(optimum)
                        objective = "lp"
                    else:
                        problem = build_sdp(q, n, r, ineqs, args.objective)
                        path = os.path.join(workdir, f"kq{q}_n{n}_r{r}.dat-s")
                        write_sdpa_sparse(problem, path, args.digits)
                        report = invoke_solver(
                            path, args.solver, args.param, timeout=args.timeout
                        )
                        if report.status not in (STATUS_OPTIMAL, STATUS_NEAR):
                            raise RuntimeError(
                                f"solver failed: {report.status} {report.message}"
                            )
                        result = finalize_bound(
                            report, problem, Decimal(str(args.margin))
                        )
                        raw = result.raw_value
                        root = result.root_value
                        bound = result.integer_bound
                        objective = args.objective
                except Exception as exc:
                    failures.append(f"q={q} n={n} r={r}: {exc}")
                    continue
                elapsed = time.monotonic() - start
                entry = known.get((q, n, r))
                flag = _flag(bound, entry)
                if flag == "UNSOUND":
                    unsound = True
                writer.writerow(
                    [q, n, r, args.method, objective,
                     f"{float(raw):.6f}", f"{float(root):.6f}", bound,
                     entry["lower"] if entry else "",
                     entry["upper"] if entry else "",
                     flag, f"{elapsed:.2f}"]
                )
    for line in failures:
        print(f"failed: {line}", file=sys.stderr)
    return EXIT_VERIFY_FAIL if unsound else EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def verify_coefficients(q: int, n: int) -> Optional[str]:
    """Compare every closed-form count against enumeration; returns the first
    counterexample description, or None on success."""
    for src in combinat.index_set(q, n):
        brute_eta = oracle.eta_table_bruteforce(q, n, src)
        brute_a4 = oracle.alpha4_table_bruteforce(q, n, src)
        if q == 2:
            closed_eta = {}
            for d in range(n + 1):
                for dst, count in combinat.eta_row_binary(n, src, d).items():
                    closed_eta[(d, dst)] = count
            closed_a4 = {}
            for jp in range(n + 1):
                for tp in range(max(0, src[0] + jp - n), min(src[0], jp) + 1):
                    for d in range(n + 1):
                        v = combinat.alpha4_binary(n, src, jp, tp, d)
                        if v:
                            closed_a4[(jp, tp, d)] = v
        else:
            closed_eta = {}
            for d, row in combinat.eta_rows_qary(q, n, src, n).items():
                for dst, count in row.items():
                    closed_eta[(d, dst)] = count
            closed_a4 = {}
            for d, row in combinat.alpha4_rows_qary(q, n, src, n).items():
                for key, count in row.items():
                    closed_a4[key + (d,)] = count
        if closed_eta != brute_eta:
            return f"eta mismatch at q={q} n={n} src={src}"
        if closed_a4 != brute_a4:
            return f"alpha4 mismatch at q={q} n={n} src={src}"
    return None


def _verify_coefficients_suite(qmax: int, nmax: int) -> Optional[str]:
    for q in range(2, qmax + 1):
        for n in range(1, nmax + 1):
            if q**n > oracle.COUNT_CAP:
                continue
            failure = verify_coefficients(q, n)
            if failure:
                return failure
    return None


def _verify_blockmap_suite(pairs: Sequence[Tuple[int, int]], trials: int,
                           tolerance: float) -> Optional[str]:
    for q, n in pairs:
        report = oracle.verify_block_map(q, n, trials=trials, tolerance=tolerance)
        if not report.passed:
            return (
                f"block map failed at q={q} n={n}: "
                f"homomorphism error {report.homomorphism_error:.3e}, "
                f"psd agreement {report.psd_sign_agreements}/{report.psd_trials}, "
                f"border error {report.border_error:.3e}"
            )
    return None


def _verify_witness(code: oracle.CodeWitness, r: Optional[int] = None
                    ) -> Optional[str]:
    from .solverio import certify_feasibility

    radius = r if r is not None else oracle.covering_radius(code)
    ineqs = default_inequalities(code.q, code.n, radius)
    problem = build_sdp(code.q, code.n, radius, ineqs, "triple")
    x = oracle.witness_x(code)
    report = certify_feasibility(problem, x, eigen_tolerance=1e-9)
    if not report.feasible:
        return (
            f"witness for |C|={len(code.words)} (q={code.q}, n={code.n}, "
            f"r={radius}) infeasible: worst slack {report.worst_linear_slack} "
            f"at {report.worst_constraint}, min eigenvalue {report.min_eigenvalue:.3e}"
        )
    expected = Fraction(len(code.words)) ** 3
    got = report.objective_value * code.q**code.n
    if got != expected:
        return f"triple objective mismatch: {got} != |C|^3 = {expected}"
    return None


def _verify_witness_suite(code_path: Optional[str], r: Optional[int]
                          ) -> Optional[str]:
    if code_path:
        with open(code_path) as fh:
            return _verify_witness(oracle.CodeWitness.parse(fh.read()), r)
    codes = [
        oracle.CodeWitness.whole_space(2, 3),
        oracle.CodeWitness.from_words(2, 3, [(0, 0, 0), (1, 1, 1)]),
        oracle.hamming_code_7(),
    ]
    for code in codes:
        failure = _verify_witness(code, None)
        if failure:
            return failure
    return None


DEFAULT_BLOCKMAP_GRID = [(2, 4), (2, 6), (3, 3), (3, 4), (4, 3)]


def cmd_verify(args) -> int:
    suites = ["coefficients", "blockmap", "witness"] if args.suite == "all" \
        else [args.suite]
    for suite in suites:
        if suite == "coefficients":
            failure = _verify_coefficients_suite(args.qmax, args.nmax)
        elif suite == "blockmap":
            if args.q and args.n:
                pairs = [(args.q, args.n)]
            else:
                pairs = list(DEFAULT_BLOCKMAP_GRID)
            failure = _verify_blockmap_suite(pairs, args.trials, args.tol)
        else:
            failure = _verify_witness_suite(args.code, args.r)
        if failure:
            print(f"FAIL {suite}: {failure}")
            return EXIT_VERIFY_FAIL
        print(f"pass {suite}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# dumps
# ---------------------------------------------------------------------------


def cmd_dump_coefficients(args) -> int:
    sys.stdout.write(combinat.dump_coefficients(args.q, args.n))
    return EXIT_OK


def cmd_lp_dump(args) -> int:
    try:
        ineqs = _resolve_inequalities(args.ineq, args.q, args.n, args.r)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FLAGS
    sys.stdout.write(build_lp(args.q, args.n, ineqs[0]).dump())
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_solver_flags(parser) -> None:
    parser.add_argument("--solver", help="solver command (overrides environment)")
    parser.add_argument("--param", help="solver parameter file")
    parser.add_argument("--digits", type=int, default=40,
                        help="significant decimal digits in the problem file")
    parser.add_argument("--margin", type=float, default=1e-4,
                        help="safety margin subtracted before the ceiling")
    parser.add_argument("--timeout", type=float, default=None,
                        help="solver timeout in seconds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coverlb",
        description="certified lower bounds for q-ary covering codes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="compute one SDP lower bound")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--ineq", help="comma list: sphere, vanwee, file:PATH")
    p.add_argument("--objective", choices=["triple", "pair", "single"],
                   default="triple")
    p.add_argument("--out", help="problem file path (.dat-s)")
    p.add_argument("--no-solve", action="store_true",
                   help="emit the problem file without solving")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("table", help="batch bounds compared against fixtures")
    p.add_argument("--q", required=True, help="range, e.g. 2 or 2-3")
    p.add_argument("--n", required=True, help="range, e.g. 4-8")
    p.add_argument("--r", required=True, help="range, e.g. 1")
    p.add_argument("--method", choices=["sdp", "lp"], default="sdp")
    p.add_argument("--objective", choices=["triple", "pair", "single"],
                   default="triple")
    p.add_argument("--ineq", help="comma list: sphere, vanwee, file:PATH")
    p.add_argument("--fixtures", help="known-bounds CSV (default: bundled)")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="run brute-force verification suites")
    p.add_argument("--suite", choices=["coefficients", "blockmap", "witness", "all"],
                   default="all")
    p.add_argument("--qmax", type=int, default=4)
    p.add_argument("--nmax", type=int, default=5)
    p.add_argument("--q", type=int, help="single block-map instance")
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--code", help="code witness file")
    p.add_argument("--r", type=int, help="radius for the witness check")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dump-coefficients", help="print all coefficients")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_dump_coefficients)

    p = sub.add_parser("lp-dump", help="print the distance-distribution LP")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--ineq", help="comma list: sphere, vanwee, file:PATH")
    p.set_defaults(func=cmd_lp_dump)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

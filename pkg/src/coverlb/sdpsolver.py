"""Self-contained SDP solver for sparse SDPA input files.

Reads a ``.dat-s`` problem (min c.x s.t. sum_k x_k F_k - F_0 >= 0), solves
it with cvxopt's interior-point cone solver, and prints an SDPA-style log
(objValPrimal, objValDual, phase.value) so that downstream log parsing
works identically for this backend and for a real SDPA binary.

Usage: python -m coverlb.sdpsolver problem.dat-s [-p paramfile]
"""

from __future__ import annotations

import argparse
import sys
from typing import Dict, Optional

from .solverio import SdpaData, read_sdpa_sparse


def parse_param_file(path: str) -> Dict[str, float]:
    """Extract the knobs this backend honors from an SDPA parameter file.

    Each recognized line carries the value in its first token and the
    parameter name somewhere in the remainder (the SDPA layout).
    """
    params: Dict[str, float] = {}
    with open(path) as fh:
        for line in fh:
            tokens = line.split()
            if len(tokens) < 2:
                continue
            rest = " ".join(tokens[1:])
            for name in ("maxIteration", "epsilonStar", "epsilonDash", "lambdaStar"):
                if name in rest:
                    try:
                        params[name] = float(tokens[0])
                    except ValueError:
                        pass
    return params


def solve(data: SdpaData, params: Optional[Dict[str, float]] = None) -> dict:
    """Solve the parsed problem; returns cvxopt's solution dictionary."""
    from cvxopt import matrix, solvers, spmatrix

    params = params or {}
    m = data.num_vars
    c = matrix([float(v) for v in data.objective], (m, 1))

    psd_sizes = [s for s in data.block_sizes if s > 0]
    psd_blocks = [b + 1 for b, s in enumerate(data.block_sizes) if s > 0]
    lin_sizes = {b + 1: -s for b, s in enumerate(data.block_sizes) if s < 0}

    Gs, hs = [], []
    block_pos = {b: idx for idx, b in enumerate(psd_blocks)}
    gs_triplets = [([], [], []) for _ in psd_blocks]  # values, rows, cols
    h_mats = [matrix(0.0, (s, s)) for s in psd_sizes]

    nlin = sum(lin_sizes.values())
    lin_offset = {}
    acc = 0
    for b in sorted(lin_sizes):
        lin_offset[b] = acc
        acc += lin_sizes[b]
    Gl = matrix(0.0, (nlin, m)) if nlin else None
    hl = matrix(0.0, (nlin, 1)) if nlin else None

    for k, b, i, j, value in data.entries:
        v = float(value)
        if b in block_pos:
            idx = block_pos[b]
            s = psd_sizes[idx]
            cells = [(i - 1) + (j - 1) * s]
            if i != j:
                cells.append((j - 1) + (i - 1) * s)
            if k == 0:
                for cell in cells:
                    h_mats[idx][cell] += -v  # hs = -F_0
            else:
                vals, rows, cols = gs_triplets[idx]
                for cell in cells:
                    vals.append(-v)  # Gs columns hold -vec(F_k)
                    rows.append(cell)
                    cols.append(k - 1)
        else:
            row = lin_offset[b] + (i - 1)
            if i != j:
                raise ValueError("off-diagonal entry in a diagonal block")
            if k == 0:
                hl[row] += -v
            else:
                Gl[row, k - 1] += -v

    for idx, s in enumerate(psd_sizes):
        vals, rows, cols = gs_triplets[idx]
        Gs.append(matrix(spmatrix(vals, rows, cols, (s * s, m))))
        hs.append(h_mats[idx])

    solvers.options["show_progress"] = False
    solvers.options["maxiters"] = int(params.get("maxIteration", 200))
    eps = params.get("epsilonStar")
    if eps:
        solvers.options["abstol"] = eps
        solvers.options["reltol"] = eps
    else:
        solvers.options["abstol"] = 1e-8
        solvers.options["reltol"] = 1e-8
    solvers.options["refinement"] = 2

    return solvers.sdp(c, Gl=Gl, hl=hl, Gs=Gs, hs=hs)


_PHASES = {
    "optimal": "pdOPT",
    "primal infeasible": "dUNBD",
    "dual infeasible": "pUNBD",
    "unknown": "noINFO",
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="coverlb-sdpsolve",
        description="solve a sparse SDPA problem file with cvxopt",
    )
    parser.add_argument("problem", help="input file in sparse SDPA format")
    parser.add_argument("-p", "--param", help="SDPA parameter file", default=None)
    args = parser.parse_args(argv)

    data = read_sdpa_sparse(args.problem)
    params = parse_param_file(args.param) if args.param else {}
    print(f"mDIM = {data.num_vars}")
    print(f"nBLOCK = {len(data.block_sizes)}")
    print("bLOCKsTRUCT = " + " ".join(str(s) for s in data.block_sizes))
    try:
        sol = solve(data, params)
    except Exception as exc:  # pragma: no cover - backend failure path
        print(f"solver backend error: {exc}")
        print("phase.value  = noINFO")
        return 1

    phase = _PHASES.get(sol["status"], "noINFO")
    primal = sol.get("primal objective")
    dual = sol.get("dual objective")
    if sol["status"] == "unknown" and primal is not None and dual is not None:
        # iteration limit with a usable iterate: report it as feasible
        gap = abs(primal - dual) / max(1.0, abs(primal))
        if gap < 1e-4:
            phase = "pdFEAS"
    if primal is not None:
        print(f"objValPrimal = {primal:+.15e}")
    if dual is not None:
        print(f"objValDual   = {dual:+.15e}")
    print(f"phase.value  = {phase}")
    return 0 if phase in ("pdOPT", "pdFEAS") else 1


if __name__ == "__main__":
    sys.exit(main())

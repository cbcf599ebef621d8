"""Certified lower bounds for q-ary covering codes.

Assembles symmetry-reduced semidefinite programs and distance-distribution
linear programs whose optima bound K_q(n, r) from below, emits them in the
sparse SDPA format, post-processes solver output into integer bounds, and
verifies every coefficient formula against brute-force enumeration.
"""

from .inequalities import (
    InequalitySet,
    default_inequalities,
    plain_lower_bound,
    sphere_covering,
    van_wee,
)
from .lpbound import build_lp, lp_lower_bound, solve_lp_exact
from .sdpmodel import SdpProblem, VariableTable, build_sdp
from .solverio import (
    BoundResult,
    SolverReport,
    certify_feasibility,
    finalize_bound,
    invoke_solver,
    parse_solver_output,
    write_sdpa_sparse,
)

__version__ = "0.1.0"

__all__ = [
    "InequalitySet",
    "default_inequalities",
    "plain_lower_bound",
    "sphere_covering",
    "van_wee",
    "build_lp",
    "lp_lower_bound",
    "solve_lp_exact",
    "SdpProblem",
    "VariableTable",
    "build_sdp",
    "BoundResult",
    "SolverReport",
    "certify_feasibility",
    "finalize_bound",
    "invoke_solver",
    "parse_solver_output",
    "write_sdpa_sparse",
    "__version__",
]

import math
from fractions import Fraction

import pytest

from coverlb import oracle
from coverlb.combinat import index_set
from coverlb.inequalities import default_inequalities, sphere_covering, van_wee
from coverlb.sdpmodel import (
    LinearForm,
    VariableTable,
    basic_linear_constraints,
    build_sdp,
    lasserre_blocks,
    matrix_cut_constraints,
    objective_form,
    psd_blocks,
)

F = Fraction


# ---------------------------------------------------------------------------
# variable canonicalization
# ---------------------------------------------------------------------------


def test_binary_canonical_classes():
    var = VariableTable(2, 2)
    a = var.canonicalize((1, 0, 0))
    assert var.canonicalize((0, 1, 0)) == a
    assert var.canonicalize((1, 1, 1)) == a
    assert var.canonicalize((0, 0, 0)) != a


def test_qary_canonical_classes():
    var = VariableTable(3, 2)
    assert var.canonicalize((1, 1, 1, 1)) == var.canonicalize((1, 0, 0, 0))
    # t - p must be preserved: (1,1,1,0) has t-p = 1
    assert var.canonicalize((1, 1, 1, 0)) != var.canonicalize((1, 0, 0, 0))


def test_representative_is_lex_minimum():
    for q in (2, 3):
        var = VariableTable(q, 4)
        for vid, rep in enumerate(var.entries):
            members = [
                idx for idx in index_set(q, 4) if var.canonicalize(idx) == vid
            ]
            assert rep == min(members)


def test_canonicalize_rejects_foreign_index():
    var = VariableTable(2, 3)
    with pytest.raises(ValueError):
        var.canonicalize((3, 3, 0))


def test_classes_agree_with_three_word_orbits():
    # two orbit indices are identified exactly when some relabeling of the
    # three words (0, u, v) maps one pair class onto the other
    q, n = 2, 4
    var = VariableTable(q, n)
    words = oracle.all_words(q, n)
    for u in words:
        for v in words:
            cls_uv = oracle.pair_class(q, u, v)
            # swapping the roles: classify (v - u, -u) relative to 0
            swapped = oracle.pair_class(
                q, oracle.subtract(v, u, q), oracle.subtract((0,) * n, u, q)
            )
            assert var.canonicalize(cls_uv) == var.canonicalize(swapped)


# ---------------------------------------------------------------------------
# constraint families
# ---------------------------------------------------------------------------


def test_basic_constraints_binary_n2_example():
    var = VariableTable(2, 2)
    forms = basic_linear_constraints(2, 2, var)
    x110 = var.canonicalize((1, 1, 0))
    x20 = var.canonicalize((2, 0, 0))
    x10 = var.canonicalize((1, 0, 0))
    x00 = var.canonicalize((0, 0, 0))
    keys = {lf.key() for lf in forms}
    # x_{1,1}^0 <= x_{2,0}^0
    want1 = LinearForm({x20: F(1), x110: F(-1)})
    # x_{1,1}^0 >= x_{1,0}^0 + x_{2,0}^0 - x_{0,0}^0
    want2 = LinearForm({x110: F(1), x10: F(-1), x20: F(-1), x00: F(1)})
    assert want1.key() in keys
    assert want2.key() in keys


def test_basic_constraints_at_most_four_per_id():
    for q, n in [(2, 5), (3, 4)]:
        var = VariableTable(q, n)
        forms = basic_linear_constraints(q, n, var)
        assert len(forms) <= 4 * len(var)


def test_psd_block_sizes_binary_n4():
    blocks = psd_blocks(2, 4)
    sizes = {label: len(rows) for label, rows in blocks}
    assert sizes["Mprime_k0"] == 5
    assert sizes["Mcompl_bordered_k0"] == 6
    assert sizes["Mprime_k1"] == 3
    assert sizes["Mprime_k2"] == 1


def test_psd_block_sizes_qary():
    blocks = psd_blocks(3, 2)
    sizes = {label: len(rows) for label, rows in blocks}
    # (a,k) block has n + a - 2k + 1 rows; the (0,0) complement is bordered
    assert sizes["Mprime_a0_k0"] == 3
    assert sizes["Mcompl_bordered_a0_k0"] == 4
    assert sizes["Mprime_a1_k1"] == 2
    assert sizes["Mprime_a2_k2"] == 1


def test_all_blocks_symmetric():
    for q, n, r in [(2, 5, 1), (3, 3, 1)]:
        problem = build_sdp(q, n, r, default_inequalities(q, n, r), "triple")
        for label, rows in problem.psd_blocks:
            size = len(rows)
            for i in range(size):
                assert len(rows[i]) == size
                for j in range(size):
                    assert rows[i][j].key() == rows[j][i].key(), (label, i, j)


def test_top_block_rank_one_at_constant_assignment():
    # at x = c everywhere, the k=0 block entry (i, j) sums the beta
    # coefficients to c * C(n,i) * C(n,j)
    n = 4
    var = VariableTable(2, n)
    blocks = dict(psd_blocks(2, n, var))
    c = F(3, 7)
    assignment = [c] * len(var)
    top = blocks["Mprime_k0"]
    for i in range(n + 1):
        for j in range(n + 1):
            value = top[i][j].evaluate(assignment)
            assert value == c * math.comb(n, i) * math.comb(n, j)


def test_lasserre_corner_examples():
    var = VariableTable(2, 3)
    blocks = dict(lasserre_blocks(2, 3, sphere_covering(2, 3, 1), var))
    corner = blocks["Lasserre_sphereCovering_bordered_k0"][0][0]
    x00 = var.canonicalize((0, 0, 0))
    assert corner.coeffs == {x00: F(4)}
    assert corner.constant == F(-1)

    var3 = VariableTable(3, 4)
    blocks3 = dict(lasserre_blocks(3, 4, sphere_covering(3, 4, 1), var3))
    corner3 = blocks3["Lasserre_sphereCovering_bordered_a0_k0"][0][0]
    x00q = var3.canonicalize((0, 0, 0, 0))
    assert corner3.coeffs == {x00q: F(9)}
    assert corner3.constant == F(-1)


def test_matrix_cut_zero_index_row_uses_pair_variables_only():
    var = VariableTable(2, 4)
    ineq = sphere_covering(2, 4, 1)
    forms = matrix_cut_constraints(2, 4, ineq, var)
    pair_ids = {var.pair_id(d) for d in range(5)}
    # family 1 at src = (0,0,0): all referenced variables are pair variables
    lf = forms[0]
    assert set(lf.coeffs) <= pair_ids


def test_matrix_cut_satisfied_by_whole_space_witness():
    code = oracle.CodeWitness.whole_space(2, 3)
    x = oracle.witness_x(code)
    ineq = sphere_covering(2, 3, 1)
    for lf in matrix_cut_constraints(2, 3, ineq):
        assert lf.evaluate(x) >= 0


# ---------------------------------------------------------------------------
# objectives and assembly
# ---------------------------------------------------------------------------


def test_triple_objective_binary_n1():
    var = VariableTable(2, 1)
    lf = objective_form(2, 1, "triple", var)
    merged = var.canonicalize((1, 0, 0))  # class {(0,1,0),(1,0,0),(1,1,1)}
    assert lf.coeffs[merged] == 3
    assert lf.coeffs[var.canonicalize((0, 0, 0))] == 1


def test_objectives_at_whole_space_witness():
    for q, n in [(2, 3), (3, 2)]:
        code = oracle.CodeWitness.whole_space(q, n)
        x = oracle.witness_x(code)
        var = VariableTable(q, n)
        triple = objective_form(q, n, "triple", var).evaluate(x)
        pair = objective_form(q, n, "pair", var).evaluate(x)
        single = objective_form(q, n, "single", var).evaluate(x)
        qn = q**n
        assert triple * qn == qn**3
        assert pair * qn == qn**2
        assert single * qn == qn


def test_build_sdp_block_count_example():
    problem = build_sdp(2, 4, 1, default_inequalities(2, 4, 1), "triple")
    # 6 pure blocks (M', M'' for k = 0,1,2) plus 2 inequality families x 3
    assert len(problem.psd_blocks) == 12
    assert problem.scale_power == 4
    assert problem.bound_exponent == 3
    assert problem.inequality_tags == ("sphereCovering", "vanWee")


def test_build_sdp_rejects_unknown_objective():
    with pytest.raises(ValueError):
        build_sdp(2, 3, 1, default_inequalities(2, 3, 1), "quadruple")


def test_build_sdp_rejects_mismatched_inequality_length():
    with pytest.raises(ValueError):
        build_sdp(2, 3, 1, [sphere_covering(2, 4, 1)], "triple")


def test_witness_feasible_on_full_problem():
    from coverlb.solverio import certify_feasibility

    code = oracle.CodeWitness.from_words(2, 3, [(0, 0, 0), (1, 1, 1)])
    assert oracle.covering_radius(code) == 1
    problem = build_sdp(2, 3, 1, default_inequalities(2, 3, 1), "triple")
    x = oracle.witness_x(code)
    report = certify_feasibility(problem, x)
    assert report.feasible
    assert report.objective_value * 2**3 == len(code.words) ** 3


def test_van_wee_addition_never_decreases_optimum():
    # weaker check at assembly level: the constraint set strictly grows
    base = build_sdp(2, 6, 1, [sphere_covering(2, 6, 1)], "triple")
    both = build_sdp(
        2, 6, 1, [sphere_covering(2, 6, 1), van_wee(6, 1)], "triple"
    )
    assert len(both.psd_blocks) > len(base.psd_blocks)
    assert len(both.linear_constraints) >= len(base.linear_constraints)

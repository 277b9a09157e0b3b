import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import QQ

from core.errors import DepthError, FieldExtensionRequired, ParseError, PreconditionError
from exactnum.series import TruncSeries
from hcp.atoms import Hcp, b_op, d_power, eval_symbol, hcp_atom_mul, hcp_commutator
from hcp.centralizer import is_totally_free_B
from normalform.conditions import Regularity, condition_Aq, irregular_point, is_regular
from normalform.graded import GradedOp, act_graded, endo_operator, graded_mul, graded_ops, invert_unit
from normalform.normalize import normalize
from normalform.schur import (bracket_solve, normal_form, normal_form_pair, normal_form_report, qp_tail,
                              qp_tail_vandermonde, schur, schur_defect, sdeg_window_violations)
from weyl.d1_op import from_weyl
from weyl.text_format import parse_op

AIRY = parse_op("d^2 - x")


@pytest.fixture(scope="module")
def airy_schur():
    return schur(from_weyl(AIRY, 12), 8)


def test_graded_window():
    G = GradedOp.from_weyl(parse_op("d^2 + x"), 1, 4)
    assert (G.top, G.lo, G.depth) == (2, -1, 4)
    assert G.component(-1) == Hcp(1, -1, {(1, 0): 1})
    with pytest.raises(DepthError):
        G.component(-2)
    assert GradedOp.one(1, 3).lo == -2


def test_product_window():
    a = GradedOp.d_power(2, 1, 3)
    b = GradedOp.from_weyl(parse_op("d + x"), 1, 5)
    prod = graded_mul(a, b)
    assert prod.lo == max(a.lo + b.top, a.top + b.lo)
    assert prod.depth == 3


def test_inverse_of_one_plus_b():
    S = GradedOp(1, [Hcp(1, 0, {(0, 0): 1}, {1: 1})], -3)
    inv = invert_unit(S)
    assert inv.component(0) == Hcp(1, 0, {(0, 0): 1}, {1: QQ(-1, 2)})
    assert graded_mul(S, inv) == GradedOp.one(1, 4)


def test_inverse_with_lower_terms():
    S = GradedOp(2, [Hcp(2, 0, {(0, 0): 1, (0, 1): QQ(1, 2)}), Hcp(2, -1, {(0, 0): 1}),
                     Hcp(2, -2, {(1, 1): 3})], -3)
    assert graded_mul(S, invert_unit(S)) == GradedOp.one(2, 4)


def test_non_units():
    with pytest.raises(PreconditionError):
        invert_unit(GradedOp(2, [Hcp(2, 0, {(0, 0): 1, (0, 1): 1})], -2))
    with pytest.raises(PreconditionError):
        invert_unit(GradedOp.from_weyl(parse_op("x*d + 1"), 1, 3))


def test_taylor_operator():
    u = TruncSeries([0, 0, 1], 10)
    G = endo_operator(u, 4)
    f = TruncSeries([1, 1, 1, 1, 1, 1, 1, 1, 1, 1], 10)
    out = act_graded(G, f)
    assert out.precision == 4
    assert out == f.compose(TruncSeries([0, 1, 1], 10))


def test_normalize_makes_head_one():
    P = from_weyl(parse_op("x*d^2 + d^2 + x*d + x"), 24)
    change, Pn = normalize(P, 10)
    assert Pn.order == 2
    assert Pn.is_normalized()
    inv = change.inverse_x()
    assert change.u.compose(inv) == TruncSeries.monomial(1, inv.precision)


def test_normalize_preconditions():
    with pytest.raises(PreconditionError):
        normalize(from_weyl(parse_op("x*d^2 + d"), 12), 6)
    with pytest.raises(FieldExtensionRequired):
        normalize(from_weyl(parse_op("2*d^2 + x"), 12), 6)


def test_bracket_solve_recovers_the_tail():
    Y = bracket_solve(2, Hcp.scalar(2, 1))
    assert Y == -qp_tail(2)
    dp = d_power(2, 2)
    assert hcp_atom_mul(dp, Y) - hcp_atom_mul(Y, dp) == Hcp.scalar(2, 1)
    with pytest.raises(PreconditionError):
        bracket_solve(2, Hcp.scalar(2, 1), 0)


@pytest.mark.parametrize("p", [2, 3, 4])
def test_qp_tail(p):
    tail = qp_tail(p)
    assert tail == qp_tail_vandermonde(p)
    assert hcp_commutator(tail.to_hcpc(), d_power(p, p).to_hcpc()) == Hcp.scalar(p, 1)
    assert not tail.b


def test_airy_schur_operator(airy_schur):
    sd = airy_schur
    assert schur_defect(sd, from_weyl(AIRY, 12)).is_zero()
    assert sdeg_window_violations(sd.S, 2) == []
    assert sdeg_window_violations(sd.S_inv, 2) == []
    assert graded_mul(sd.S, sd.S_inv) == GradedOp.one(2, 8)
    assert sd.S_inv.component(0) == Hcp.scalar(2, 1)
    assert sd.S_inv.component(-1).is_zero()
    assert all(is_totally_free_B(H) for H in sd.S_inv)
    assert sd.S.component(-1).is_zero() and sd.S.component(-2).is_zero()
    assert all(is_totally_free_B(H) for H in sd.S)


def test_airy_first_correction(airy_schur):
    S3 = airy_schur.S.component(-3)
    for n in range(3, 9):
        expected = QQ(-n * n, 4) + QQ(n, 2) - QQ(1, 8) + QQ((-1) ** n, 8)
        assert eval_symbol(S3, n, include_b=False) == expected


def test_normal_form_satisfies_condition_a(airy_schur):
    Q = from_weyl(parse_op("d^3 + x*d + 2"), 14)
    Qt = normal_form(Q, airy_schur)
    assert condition_Aq(Qt, 2, 0).ok
    assert Qt.top == 3


def test_normal_form_of_the_operator_itself():
    sd, Pt = normal_form_pair(AIRY, AIRY, depth=6)
    assert Pt == GradedOp.d_power(2, 2, 6)
    report = normal_form_report(Pt, 2)
    assert report.all_central()
    assert report.tail_central is False


def test_condition_a_witnesses():
    assert condition_Aq(GradedOp.from_weyl(parse_op("d^2"), 2, 4), 2, 0).ok
    bad_b = condition_Aq(GradedOp(1, [d_power(1), b_op(1)], -2), 1, 0)
    assert not bad_b and bad_b.witness.clause == 2 and bad_b.witness.order == 0
    bad_symbol = condition_Aq(GradedOp(2, [Hcp(2, 1, {(0, 1): 1})], -2), 2, 0)
    assert bad_symbol.witness.clause == 4
    bad_sdeg = condition_Aq(GradedOp(1, [d_power(2), Hcp(1, 1, {(1, 0): 1})], -1), 1, 0)
    assert bad_sdeg.witness.clause == 3


def test_regularity():
    assert is_regular(from_weyl(parse_op("x*d + d"), 8)) is Regularity.REGULAR
    assert is_regular(from_weyl(parse_op("x*d"), 8)) is Regularity.IRREGULAR
    assert is_regular(from_weyl(parse_op("x*d + 1"), 8)) is Regularity.REGULAR
    assert irregular_point(Hcp(1, 0, {(2, 0): 1, (1, 0): -3})) == 0
    assert irregular_point(Hcp(1, 0, {(2, 0): 1, (1, 0): -3}, {1: 1})) == 4
    assert irregular_point(Hcp(1, -1, {(0, 0): 1})) == 0


def test_conjugation_and_sums_of_graded_operators(airy_schur):
    Q = from_weyl(parse_op("d^3 + x*d + 2"), 14)
    Qg = GradedOp.from_d1(Q, 2)
    assert graded_ops(airy_schur.S, Qg, "conjugate") == normal_form(Q, airy_schur)
    a = GradedOp.from_weyl(parse_op("d^2 + x"), 2, 6)
    b = GradedOp.from_weyl(parse_op("x*d - 3"), 2, 6)
    assert graded_ops(a, b, "add") == GradedOp.from_weyl(parse_op("d^2 + x*d + x - 3"), 2, 6)
    with pytest.raises(PreconditionError):
        graded_ops(a, b, "divide")


def test_graded_json(airy_schur):
    S = airy_schur.S
    again = GradedOp.from_json(S.to_json())
    assert again == S
    assert (again.top, again.lo) == (S.top, S.lo)
    with pytest.raises(ParseError):
        GradedOp.from_json({"modulus": 2, "top": 0})


def test_commuting_pair_has_central_normal_form():
    # the centralizer of d^2 - x is K[d^2 - x]
    Q = AIRY * AIRY + AIRY + AIRY
    sd, Qt = normal_form_pair(AIRY, Q, depth=8)
    assert Qt.top == 4
    assert Qt == GradedOp.from_weyl(parse_op("d^4 + 2*d^2"), 2, 8)
    report = normal_form_report(Qt, 2)
    assert report.central_except_tail(2)
    assert report.all_central()


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(min_value=-3, max_value=3), min_size=8, max_size=8),
       st.lists(st.integers(min_value=-3, max_value=3), min_size=10, max_size=10))
def test_taylor_operator_on_random_shifts(tail, f_coeffs):
    u = TruncSeries([0, 0] + tail, 10)
    G = endo_operator(u, 4)
    f = TruncSeries(f_coeffs, 10)
    out = act_graded(G, f)
    assert out.precision == 4
    assert out == f.compose(TruncSeries([0, 1] + tail, 10))


def test_taylor_operator_preconditions():
    with pytest.raises(PreconditionError):
        endo_operator(TruncSeries([1, 0, 1], 10), 4)
    with pytest.raises(PreconditionError):
        endo_operator(TruncSeries([0, 1, 1], 10), 4)


def test_sdeg_window_uses_exact_bounds():
    G = GradedOp(3, [Hcp.scalar(3, 1), Hcp(3, -2, {(0, 0): 1}), Hcp(3, -4, {(0, 0): 1}), Hcp(3, -5, {(1, 0): 1})], -5)
    # t = 4 needs Sdeg_A > 1/3 and t = 5 needs Sdeg_A > 2/3
    assert sdeg_window_violations(G, 3) == [-4]

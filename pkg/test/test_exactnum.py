import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import QQ

from core.errors import (DivisionByZeroError, FieldExtensionRequired, FieldMismatchError, ObstructionError, ParseError,
                         PrecisionError, PreconditionError)
from exactnum.cyclotomic import cyc_arith, cyclotomic_field, format_cyc, parse_cyc
from exactnum.linalg import rank_cyc, solve_cyc
from exactnum.scalars import format_rat, nth_root_rational, parse_rat, rat
from exactnum.series import AtLeast, TruncSeries, format_series, parse_series, series_arith, series_exp

small = st.integers(min_value=-20, max_value=20)
moduli = st.integers(min_value=1, max_value=8)


def cyc_elems(k):
    field = cyclotomic_field(k)
    return st.lists(small, min_size=field.degree, max_size=field.degree).map(
        lambda cs: sum((field.xi_power(j) * c for j, c in enumerate(cs)), field.zero))


def test_rational_text():
    assert parse_rat("-6/4") == QQ(-3, 2)
    assert format_rat(QQ(-3, 2)) == "-3/2"
    assert format_rat(rat(7)) == "7"
    with pytest.raises(ParseError):
        parse_rat("1/0")
    with pytest.raises(ParseError):
        parse_rat("x")


def test_nth_root_rational():
    assert nth_root_rational(QQ(8, 27), 3) == QQ(2, 3)
    assert nth_root_rational(-8, 3) == -2
    with pytest.raises(FieldExtensionRequired):
        nth_root_rational(2, 2)
    with pytest.raises(FieldExtensionRequired):
        nth_root_rational(-4, 2)


@pytest.mark.parametrize("k,degree", [(1, 1), (2, 1), (3, 2), (4, 2), (5, 4), (6, 2), (12, 4)])
def test_field_degree_is_totient(k, degree):
    assert cyclotomic_field(k).degree == degree


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_xi_is_primitive_root(k):
    field = cyclotomic_field(k)
    assert field.xi ** k == field.one
    assert all(field.xi ** j != field.one for j in range(1, k))
    assert sum((field.xi_power(j) for j in range(k)), field.zero) == field.zero


@settings(max_examples=40, deadline=None)
@given(moduli.flatmap(lambda k: st.tuples(cyc_elems(k), cyc_elems(k), cyc_elems(k))))
def test_field_axioms(triple):
    a, b, c = triple
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    if a:
        assert a * a.inverse() == a.field.one
        assert cyc_arith(a, op="inv") == a.inverse()


def test_cyclotomic_text():
    value = parse_cyc("(1 + 2*z)@3")
    assert value == cyclotomic_field(3).one + cyclotomic_field(3).xi * 2
    assert parse_cyc(format_cyc(value)) == value
    assert format_cyc(cyclotomic_field(4).xi ** 2) == "(-1)@4"


def test_mismatched_conductors():
    with pytest.raises(FieldMismatchError):
        cyc_arith(cyclotomic_field(3).xi, cyclotomic_field(4).xi, op="add")


def test_embedding():
    f4 = cyclotomic_field(4)
    assert f4.embed(cyclotomic_field(2).xi) == f4.xi ** 2


def test_series_inverse_and_exp():
    one_minus_x = TruncSeries([1, -1], 8)
    geometric = one_minus_x.inverse()
    assert geometric == TruncSeries([1] * 8)
    e = TruncSeries([0, 1], 6).exp()
    assert e.coeffs[3] == QQ(1, 6)
    assert e.coeffs[5] == QQ(1, 120)


def test_series_root():
    s = TruncSeries([1, 2, 1], 10)
    assert s.nth_root(2) == TruncSeries([1, 1], 10)


def test_series_precision_rules():
    s = TruncSeries([1, 2, 3], 5)
    assert s.derive().precision == 4
    assert s.antiderive().precision == 6
    assert (s * TruncSeries([1], 3)).precision == 3
    with pytest.raises(PrecisionError):
        s[5]


def test_series_valuation():
    assert TruncSeries([0, 0, 3], 4).valuation() == 2
    assert TruncSeries([0, 0], 2).valuation() == AtLeast(2)


def test_series_text():
    s = parse_series("1 - 1/2*x^2 + O(x^4)")
    assert s.coeffs == (QQ(1), QQ(0), QQ(-1, 2), QQ(0))
    assert format_series(s) == "1 - 1/2*x^2 + O(x^4)"
    with pytest.raises(ParseError):
        parse_series("1 + x")


@settings(max_examples=30, deadline=None)
@given(st.lists(small, min_size=1, max_size=6))
def test_compose_with_x_is_identity(coeffs):
    s = TruncSeries(coeffs, 6)
    assert s.compose(TruncSeries([0, 1], 6)) == s


def test_solve_over_cyclotomic_field():
    field = cyclotomic_field(3)
    xi = field.xi
    rows = [[field.one, xi], [field.one, xi ** 2]]
    sol = solve_cyc(rows, [field.one, field.zero], field)
    assert sol[0] + sol[1] * xi == field.one
    assert sol[0] + sol[1] * xi ** 2 == field.zero
    assert rank_cyc(rows, field) == 2


def test_inconsistent_system():
    field = cyclotomic_field(1)
    with pytest.raises(ObstructionError):
        solve_cyc([[1, 1], [2, 2]], [1, 3], field)


series6 = st.lists(small, min_size=1, max_size=6).map(lambda cs: TruncSeries(cs, 6))
unit_series6 = st.lists(small, min_size=5, max_size=5).map(lambda cs: TruncSeries([1] + cs, 6))


@settings(max_examples=30, deadline=None)
@given(series6, series6, series6)
def test_series_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c


@settings(max_examples=30, deadline=None)
@given(unit_series6, st.integers(min_value=1, max_value=6))
def test_series_roots(f, d):
    root = f.nth_root(d)
    assert root[0] == 1
    assert root ** d == f
    assert (f ** d).nth_root(d) == f


def test_series_root_preconditions():
    with pytest.raises(PreconditionError):
        TruncSeries([2, 1], 4).nth_root(2)
    with pytest.raises(PreconditionError):
        TruncSeries([1, 1], 4).nth_root(0)
    with pytest.raises(PreconditionError):
        TruncSeries([0, 1], 4).inverse()


def test_zero_has_no_inverse_in_a_cyclotomic_field():
    with pytest.raises(DivisionByZeroError):
        cyclotomic_field(3).zero.inverse()
    with pytest.raises(ZeroDivisionError):
        cyclotomic_field(1).zero.inverse()


def test_series_dispatch():
    a = parse_series("1 + x + O(x^4)")
    b = parse_series("x + x^2 + O(x^4)")
    assert series_arith(a, b, "add") == parse_series("1 + 2*x + x^2 + O(x^4)")
    assert series_arith(a, b, "compose") == parse_series("1 + x + x^2 + O(x^4)")
    assert series_arith(a, op="derive") == parse_series("1 + O(x^3)")
    assert series_arith(series_exp(b), op="inv") * series_exp(b) == TruncSeries([1], 4)
    with pytest.raises(PreconditionError):
        series_arith(a, op="mul")
    with pytest.raises(PreconditionError):
        series_arith(a, b, "divide")

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from sympy.polys.domains import QQ

from core.errors import PreconditionError
from newton.dixmier import BRACKET_SIGN, dixmier_split, proportionality_constant, proportional_tops
from newton.polygon import (BORD, ORD, ORD_X, BivarPoly, Weight, hull, monomial_check, poisson, polygon_data,
                            top_part, weight_degree)
from newton.subrect import (NotSubrectangular, corners, ess_gcd, highest_monomial, is_subrectangular, rate,
                            subrect_data, weight_image)
from weyl.text_format import parse_op
from weyl.weyl_op import WeylOp

nonzero_ops = st.dictionaries(
    st.tuples(st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3)),
    st.integers(min_value=-3, max_value=3).filter(bool),
    min_size=1, max_size=4,
).map(WeylOp)
positive_weights = st.builds(Weight, st.integers(min_value=1, max_value=3), st.integers(min_value=1, max_value=3))


def test_weight_degree_and_top():
    P = parse_op("x^2*d + x*d^3")
    wd = weight_degree(P, ORD)
    assert wd.value == 3 and wd.top == ((1, 3),)
    assert weight_degree(P, ORD_X).value == 2
    assert weight_degree(P, BORD).value == 2
    assert top_part(P, Weight(1, 1)) == BivarPoly.monomial(1, 3)
    assert monomial_check(top_part(P, Weight(1, 1)))
    assert not monomial_check(top_part(parse_op("x^2*d + x*d^2"), Weight(1, 1)))


def test_weight_degree_of_zero():
    with pytest.raises(PreconditionError):
        weight_degree(WeylOp.zero(), ORD)


def test_hull_skips_interior_points():
    points = [(0, 0), (2, 0), (0, 2), (2, 2), (1, 1), (1, 0)]
    assert hull(points) == [(0, 0), (2, 0), (2, 2), (0, 2)]
    assert hull([(3, 1)]) == [(3, 1)]


def test_polygon_json():
    data = polygon_data(parse_op("x*d^2 + x^3 + 1"))
    out = data.to_json()
    assert out["tops"]["(0,1)"] == {"value": "2", "top": [[1, 2]]}
    assert out["tops"]["(1,0)"]["value"] == "3"
    assert sorted(map(tuple, out["hull"])) == [(0, 0), (1, 2), (3, 0)]


def test_poisson_bracket_of_coordinates():
    assert poisson(BivarPoly.x(), BivarPoly.y()) == 1
    assert poisson(BivarPoly.y(), BivarPoly.x()) == -1


def test_evaluate_orders_x_left():
    F = BivarPoly.monomial(1, 1, 2) + BivarPoly.y() ** 2
    assert F.evaluate(WeylOp.x(), WeylOp.d()) == parse_op("2*x*d + d^2")


def test_dixmier_on_the_canonical_pair():
    T, U, report = dixmier_split(WeylOp.d(), WeylOp.x(), Weight(1, 1))
    assert T == WeylOp.one() and U.is_zero()
    assert report.level == 0
    assert report.ok and not report.t_zero
    assert BivarPoly.from_weyl(T) == poisson(BivarPoly.y(), BivarPoly.x()) * BRACKET_SIGN


def test_dixmier_rejects_bad_weights():
    with pytest.raises(PreconditionError):
        dixmier_split(WeylOp.d(), WeylOp.x(), Weight(1, -1))


@settings(max_examples=50, deadline=None)
@given(nonzero_ops, nonzero_ops, positive_weights)
def test_dixmier_laws(P, Q, weight):
    _, _, report = dixmier_split(P, Q, weight)
    assert report.ok
    assert report.t_zero == report.poisson_zero


def test_proportionality():
    a = BivarPoly({(1, 2): 2, (0, 1): 4})
    b = BivarPoly({(1, 2): 1, (0, 1): 2})
    assert proportionality_constant(a, b) == 2
    assert proportionality_constant(a, BivarPoly.monomial(1, 2)) is None
    assert proportional_tops(BivarPoly.monomial(1, 2), BivarPoly.monomial(2, 4, 3), 1, 2)
    assert not proportional_tops(BivarPoly.monomial(1, 2), BivarPoly.monomial(2, 3), 1, 2)


def test_subrectangular_data():
    P, Q = parse_op("x*d^2 + d"), parse_op("x^2*d^4 + x")
    assert highest_monomial(P) == (1, 2)
    data = subrect_data(P, Q)
    assert (data.d, data.l, data.n, data.m, data.d2) == (2, 1, 1, 2, 2)
    assert data.epsilon == QQ(1, 2)
    assert ess_gcd(P, Q) == 2
    assert rate(P, Q, Weight(1, 1)) == QQ(1, 2)


def test_not_subrectangular():
    assert not is_subrectangular(parse_op("x + d"))
    assert isinstance(subrect_data(parse_op("x + d"), parse_op("x*d")), NotSubrectangular)
    with pytest.raises(PreconditionError):
        ess_gcd(parse_op("d"), parse_op("x*d"))
    assert subrect_data(parse_op("x*d"), parse_op("x*d^2")).epsilon is None


def test_corners():
    c = corners(parse_op("x^2*d + x^2*d^3 + x*d^3"))
    assert (c.en10, c.st10, c.en01, c.st01) == ((2, 3), (2, 1), (1, 3), (2, 3))


def _subrectangular(corner, rest):
    """An operator whose support sits in the rectangle below ``corner``, corner included."""
    l, k = corner
    terms = {(i, j): c for (i, j), c in rest.items() if i <= l and j <= k}
    terms[corner] = terms.get(corner, 0) or 1
    return WeylOp(terms)


corner_points = st.tuples(st.integers(min_value=1, max_value=3), st.integers(min_value=1, max_value=3))
lower_terms = st.dictionaries(
    st.tuples(st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3)),
    st.integers(min_value=-3, max_value=3).filter(bool),
    max_size=4,
)
subrect_ops = st.builds(_subrectangular, corner_points, lower_terms)


@settings(max_examples=40, deadline=None)
@given(subrect_ops, subrect_ops)
def test_highest_monomial_adds_under_products(P, Q):
    (lp, kp), (lq, kq) = highest_monomial(P), highest_monomial(Q)
    assert highest_monomial(P * Q) == (lp + lq, kp + kq)
    assert highest_monomial(Q * P) == (lp + lq, kp + kq)


@settings(max_examples=40, deadline=None)
@given(corner_points, st.integers(min_value=1, max_value=3), st.integers(min_value=1, max_value=3),
       lower_terms, lower_terms, positive_weights, positive_weights)
def test_rate_does_not_depend_on_the_weight(base, n, m, rest_p, rest_q, w1, w2):
    a, b = base
    P = _subrectangular((n * a, n * b), rest_p)
    Q = _subrectangular((m * a, m * b), rest_q)
    data = subrect_data(P, Q)
    assert data.epsilon == QQ(n, m)
    assert rate(P, Q, w1) == rate(P, Q, w2) == data.epsilon


def test_rate_needs_a_positive_weight():
    with pytest.raises(PreconditionError):
        rate(parse_op("x*d^2"), parse_op("x^2*d^4"), Weight(1, 0))


def test_weight_image_on_a_known_pair():
    P, Q = parse_op("x*d^2 + d"), parse_op("x^2*d^4 + x")
    assert weight_image(P, Q, parse_op("x^2*d + x"), Weight(1, 1)) == (12, 12)
    with pytest.raises(PreconditionError):
        weight_image(P, Q, parse_op("x^2 + d"), Weight(1, 1))
    with pytest.raises(PreconditionError):
        weight_image(parse_op("x*d"), parse_op("x*d^2"), parse_op("x"), Weight(1, 1))


WEIGHT_IMAGE_PAIRS = (
    (parse_op("x*d^2 + d"), parse_op("x^2*d^4 + x")),
    (parse_op("x*d + 1"), parse_op("x*d - 2*x")),
    (parse_op("x^2*d^2 + x*d"), parse_op("x*d + d")),
)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(WEIGHT_IMAGE_PAIRS), nonzero_ops, positive_weights)
def test_weight_image_law(pair, F, weight):
    P, Q = pair
    assume(monomial_check(top_part(F, Weight(subrect_data(P, Q).epsilon, 1))))
    lhs, rhs = weight_image(P, Q, F, weight)
    assert lhs == rhs

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import QQ

from core.errors import ParseError, PreconditionError
from exactnum.scalars import formal_parameter
from exactnum.series import TruncSeries
from weyl.d1_op import D1Op, from_weyl, leading_data
from weyl.endo import (FOURIER, Endo, apply_endo, compose_endo, compose_word, generic_shift, inverse_generator,
                       linear, phi, phi_prime, shift_x, tame)
from weyl.text_format import format_op, format_word, op_from_json, op_to_json, parse_op, parse_word
from weyl.weyl_op import WeylOp, commutator

X, D = WeylOp.x(), WeylOp.d()

coeffs = st.integers(min_value=-3, max_value=3)
exponents = st.tuples(st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3))
weyl_ops = st.dictionaries(exponents, coeffs, max_size=4).map(WeylOp)
generators = st.one_of(
    st.builds(phi, st.integers(min_value=0, max_value=3), st.integers(min_value=1, max_value=3)),
    st.builds(phi_prime, st.integers(min_value=0, max_value=3), st.integers(min_value=-3, max_value=-1)),
    st.just(FOURIER),
    st.builds(lambda c: linear(1, 0, c, 1), st.integers(min_value=-3, max_value=3)),
)


def test_canonical_commutator():
    assert commutator(D, X) == WeylOp.one()
    assert D * X == X * D + 1


def test_normal_ordering_of_text():
    assert parse_op("d*x") == WeylOp({(1, 1): 1, (0, 0): 1})
    assert parse_op("d^2*x^2") == WeylOp({(2, 2): 1, (1, 1): 4, (0, 0): 2})


def test_text_round_trip():
    P = parse_op("3*x^2*d - 1/2*d^3 + 7")
    assert parse_op(format_op(P)) == P
    assert op_from_json(json.loads(json.dumps(op_to_json(P)))) == P


def test_bad_text():
    with pytest.raises(ParseError):
        parse_op("x**d")
    with pytest.raises(ParseError):
        parse_op("")


@settings(max_examples=40, deadline=None)
@given(weyl_ops, weyl_ops, weyl_ops)
def test_associativity_and_distributivity(P, Q, R):
    assert (P * Q) * R == P * (Q * R)
    assert P * (Q + R) == P * Q + P * R


@settings(max_examples=40, deadline=None)
@given(weyl_ops, weyl_ops, st.integers(min_value=0, max_value=6))
def test_product_acts_as_composition(P, Q, m):
    assert (P * Q).act_monomial(m) == P.act_on_poly(Q.act_monomial(m))


def test_weights():
    assert parse_op("x^3*d + x*d^2").weights() == (2, 3, 1)
    with pytest.raises(PreconditionError):
        WeylOp.zero().weights()


def test_tame_generators():
    E = tame(phi(2, 1))
    assert E.img_x == parse_op("x + d^2") and E.img_d == D
    assert Endo.checked(E.img_x, E.img_d).verified
    with pytest.raises(PreconditionError):
        tame(linear(1, 1, 1, 1))


@settings(max_examples=30, deadline=None)
@given(generators)
def test_generator_inverse(gen):
    assert compose_endo(tame(gen), tame(inverse_generator(gen))).is_identity()


@settings(max_examples=20, deadline=None)
@given(st.lists(generators, max_size=3))
def test_words_give_automorphism_images(word):
    E = compose_word(word)
    assert commutator(E.img_d, E.img_x) == WeylOp.one()


def test_composition_order():
    E = compose_word([phi_prime(1, 1), phi(2, 1)])
    assert E.img_x == parse_op("x + d^2 + 2*x*d + x^2 + 1")
    assert E.img_d == parse_op("d + x")


def test_word_text():
    word = [phi(3, 1), phi_prime(0, QQ(-1, 2)), FOURIER]
    assert format_word(word) == "Phi(3,1); PhiP(0,-1/2); Lin(0,1,-1,0)"
    assert parse_word(format_word(word)) == word


def test_apply_endo_keeps_normal_order():
    F = tame(FOURIER)
    assert apply_endo(F, X * D) == parse_op("-d*x")


def test_formal_coefficients():
    lam = formal_parameter()
    E = tame(phi(1, lam))
    image = apply_endo(E, X ** 2)
    assert image.coeff(0, 2) == lam ** 2
    assert image.coeff(0, 0) == lam


def test_shifts():
    P = parse_op("x*d^2 + d")
    c, shifted = generic_shift(P)
    assert c == 1
    assert shifted == shift_x(P, 1) == parse_op("x*d^2 + d^2 + d")


def test_d1_embedding_respects_products():
    P, Q = parse_op("x*d + 1"), parse_op("x^2*d^2 - d")
    M = 10
    assert from_weyl(P * Q, M) == from_weyl(P, M) * from_weyl(Q, M)


def test_d1_apply_and_leading_data():
    P = from_weyl(parse_op("x*d"), 6)
    f = TruncSeries([1, 1, 1, 1, 1, 1], 6)
    assert P.apply(f) == TruncSeries([0, 1, 2, 3, 4], 5)
    data = leading_data(parse_op("d^2 - x"))
    assert data.order == 2 and data.monic and data.elliptic
    assert D1Op.d_power(2, 4).is_normalized()


def test_bad_operator_json():
    with pytest.raises(ParseError):
        op_from_json([{"i": -1, "j": 0, "coeff": "1"}])
    with pytest.raises(ParseError):
        op_from_json([{"i": 0, "coeff": "1"}])
    with pytest.raises(ParseError):
        op_from_json({"i": 0, "j": 0, "coeff": "1"})

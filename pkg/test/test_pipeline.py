import pytest
from sympy.polys.domains import QQ

from core.errors import PreconditionError
from core.event_bus import EventBus
from events.events import CheckCompleted, RecursionStepRecorded, ReductionMoveApplied
from newton.polygon import BivarPoly
from pipeline.decompose import decompose_automorphism, recompose, total_degree
from pipeline.lemma_suite import DEFAULT_BOUNDS, lemma_suite
from pipeline.ode import (PairShape, as_poly, dense_ode_oracle, induction_step_shape, ode_operator, one_root_solution,
                          poly_ode_solve)
from pipeline.recursion import Exponents, Verdict, fi_recursion
from pipeline.twist import default_twist_degree, twisted_pair, twisted_top
from weyl.endo import FOURIER, compose_word, phi, phi_prime
from weyl.text_format import parse_op
from weyl.weyl_op import WeylOp

SMALL_BOUNDS = {
    "max_modulus": 2,
    "identity_modulus": 2,
    "word_length": 4,
    "max_monomial": 5,
    "identity_index": 3,
    "identity_power": 2,
    "words": 10,
    "dixmier_pairs": 8,
    "ode_instances": 6,
    "ode_degree": 3,
    "tame_words": 4,
    "tame_length": 2,
    "tame_degree": 2,
    "recursion_order": 6,
    "schur_depth": 4,
}


# polynomial ODE ----------------------------------------------------------

def test_ode_without_solution():
    g = [0, -1, 1]
    sol = poly_ode_solve(g, 1, 3, 0, 1)
    assert not sol.solvable and sol.degree is None
    assert sol.roots == 2
    assert dense_ode_oracle(g, 1, 3, 0, 1) is None


def test_ode_single_root():
    sol = poly_ode_solve([1, 1], 2, 2, 2, 1)
    assert sol.solvable and sol.degree_bound == 2
    expected = one_root_solution(1, 1, 2, 2, 1)
    assert sol.H == expected
    assert dense_ode_oracle([1, 1], 2, 2, 2, 1) == expected
    g = as_poly([1, 1])
    assert ode_operator(sol.H, g, 2, 2) == g ** 2


def test_ode_preconditions():
    with pytest.raises(PreconditionError):
        poly_ode_solve([1, 1], 2, 2, 3, 1)
    with pytest.raises(PreconditionError):
        poly_ode_solve([0], 1, 1, 0, 1)
    with pytest.raises(PreconditionError):
        one_root_solution(1, 2, 2, 2, 1)


def test_induction_step():
    step = induction_step_shape(PairShape(3, 2, 3, 1))
    assert (step.z, step.A, step.predicted_degree) == (3, 2, 2)
    assert step.matches
    assert step.solution.H == one_root_solution(1, 1, 2, 3, QQ(1, 3))


def test_pair_shape_validation():
    shape = PairShape(3, 1, 2, 2)
    assert (shape.p, shape.q, shape.d2, shape.epsilon) == (3, 6, 3, QQ(1, 2))
    with pytest.raises(PreconditionError):
        PairShape(2, 2, 2, 1)
    with pytest.raises(PreconditionError):
        PairShape(2, 1, 2, 2)


# order-reducing recursion ------------------------------------------------

def test_recursion_drops_below_order_one():
    P = parse_op("x + d^2 + 2*x*d + x^2 + 1")
    Q = parse_op("d + x")
    bus = EventBus()
    seen = []
    bus.subscribe(RecursionStepRecorded, seen.append)
    trace = fi_recursion(P, Q, bus=bus)
    assert trace.verdict is Verdict.ORDER_BELOW_ONE
    first = trace.steps[0]
    assert (first.n, first.m, first.epsilon) == (2, 1, 1)
    assert trace.last.Q == parse_op("-x")
    assert trace.last.F == BivarPoly.y() ** 2 - BivarPoly.x()
    assert trace.orders() == [1, 0]
    assert [e.index for e in seen] == [0]
    assert trace.to_json()["verdict"] == "order below 1"


def test_recursion_reaches_zero():
    trace = fi_recursion(parse_op("d^2"), parse_op("d^3"))
    assert trace.verdict is Verdict.ZERO
    assert (trace.steps[0].n, trace.steps[0].m) == (2, 3)
    assert trace.last.order is None


def test_recursion_stops():
    assert fi_recursion(parse_op("d^2"), parse_op("x*d^3")).verdict is Verdict.NOT_PROPORTIONAL
    assert fi_recursion(parse_op("2*d^2"), parse_op("d^3")).verdict is Verdict.FIELD_EXTENSION
    trace = fi_recursion(parse_op("d^2"), parse_op("d^3 + x"), max_steps=0)
    assert trace.verdict is Verdict.MAX_STEPS and len(trace.steps) == 1
    full = fi_recursion(parse_op("d^2"), parse_op("d^4"), exponents=Exponents.FULL)
    assert (full.steps[0].n, full.steps[0].m) == (2, 4)
    with pytest.raises(PreconditionError):
        fi_recursion(parse_op("x"), parse_op("d"))


# decomposition into tame generators ---------------------------------------

def test_decompose_single_generator():
    dec = decompose_automorphism(parse_op("x"), parse_op("d + x^3"))
    assert dec.ok
    assert dec.word == [phi_prime(3, 1)]
    assert dec.word_text() == "PhiP(3,1)"


def test_decompose_two_moves():
    target = compose_word([phi(2, 1), phi_prime(1, 1)])
    assert target.img_x == parse_op("x + d^2")
    bus = EventBus()
    moves = []
    bus.subscribe(ReductionMoveApplied, moves.append)
    dec = decompose_automorphism(target.img_x, target.img_d, bus=bus)
    assert dec.ok and len(dec.moves) == 2
    assert [m.degree for m in moves] == [3, 2]
    back = recompose(dec)
    assert back.img_x == target.img_x and back.img_d == target.img_d


def test_decompose_with_affine_part():
    target = compose_word([FOURIER, phi(0, 3), phi(3, QQ(1, 2)), phi_prime(2, -1)])
    dec = decompose_automorphism(target.img_x, target.img_d)
    assert dec.ok
    back = recompose(dec)
    assert (back.img_x, back.img_d) == (target.img_x, target.img_d)


def test_decompose_certificates():
    dec = decompose_automorphism(parse_op("x"), parse_op("2*d"))
    assert not dec.ok and dec.certificate.step == 0
    target = compose_word([phi(2, 1), phi_prime(1, 1)])
    stuck = decompose_automorphism(target.img_x, target.img_d, max_steps=1)
    assert not stuck.ok and stuck.certificate.step == 1
    assert total_degree(stuck.certificate.Q) == 2


# twists ------------------------------------------------------------------

def test_twisted_top():
    res = twisted_top(WeylOp.monomial(2, 4), 1, QQ(1, 2), 1)
    assert res.top_line.coeff(0, 6) != 0
    assert res.eps_part == BivarPoly.monomial(0, 6)
    assert res.monomial and res.unique_vertex
    assert default_twist_degree(QQ(1, 2)) == 1 and default_twist_degree(3) == 4
    with pytest.raises(PreconditionError):
        twisted_top(WeylOp.monomial(2, 4), 1, 2, 2)
    with pytest.raises(PreconditionError):
        twisted_top(WeylOp.monomial(2, 4), 0, QQ(1, 2))


@pytest.mark.parametrize("d, n, m, l, orders", [(2, 1, 2, 1, (12, 24)), (3, 1, 2, 1, (24, 48))])
def test_twisted_pair(d, n, m, l, orders):
    shape = PairShape(d, n, m, l)
    P, Q = WeylOp.monomial(l * n, d * n), WeylOp.monomial(l * m, d * m)
    pair = twisted_pair(P, Q, -2, shape=shape)
    assert pair.N == 1
    assert pair.orders == orders == pair.predicted
    assert pair.ess_gcd_kept and pair.ess_gcd == shape.d2


def test_twisted_pair_needs_subrectangular_input():
    with pytest.raises(PreconditionError):
        twisted_pair(parse_op("x + d"), parse_op("x*d"), 1)


# lemma suite -------------------------------------------------------------

def test_lemma_suite_passes_and_is_reproducible():
    first = lemma_suite(seed=11, bounds=SMALL_BOUNDS)
    assert first.passed, first.failures()
    assert [c.check_id for c in first.checks] == sorted(c.check_id for c in first.checks)
    assert len(first.checks) == 10
    again = lemma_suite(seed=11, bounds=SMALL_BOUNDS)
    assert again.to_json() == first.to_json()


def test_corrupted_rewriting_is_caught():
    report = lemma_suite(seed=11, bounds=SMALL_BOUNDS, only=["identities"], corrupt=True)
    assert not report.passed
    assert report.check("identities").witness is not None
    clean = lemma_suite(seed=11, bounds=SMALL_BOUNDS, only=["identities"])
    assert clean.passed


def test_lemma_suite_events():
    bus = EventBus()
    seen = []
    bus.subscribe(CheckCompleted, seen.append)
    report = lemma_suite(seed=1, bounds=SMALL_BOUNDS, only=["qp-tail", "twist"], bus=bus)
    assert [e.check_id for e in seen] == ["qp-tail", "twist"]
    assert all(e.passed for e in seen)
    with pytest.raises(KeyError):
        report.check("dixmier")


FULL_BOUNDS = {
    "identity_modulus": 6,
    "max_modulus": 4,
    "words": 1000,
    "dixmier_pairs": 300,
    "ode_instances": 200,
    "ode_degree": 10,
    "tame_words": 100,
    "tame_length": 6,
}


def test_default_bounds_reach_full_scale():
    report = lemma_suite(only=[])
    assert report.checks == []
    for key, value in FULL_BOUNDS.items():
        assert DEFAULT_BOUNDS[key] >= value
        assert report.bounds[key] >= value


@pytest.mark.slow
def test_lemma_suite_at_full_bounds():
    report = lemma_suite(seed=20240611)
    assert report.passed, report.failures()
    assert len(report.checks) == 10

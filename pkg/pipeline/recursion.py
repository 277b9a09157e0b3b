# pipeline/recursion.py
"""
The order-reducing sequence

    F_0 = Y,        F_(i+1) = F_i^(n_i) - eps_i^(n_i) X^(m_i)
    Q_0 = Q,        Q_(i+1) = Q_i^(n_i) - eps_i^(n_i) P^(m_i)

where n_i, m_i and eps_i come from the proportional ord-tops
f_{0,1}(Q_i)^(n_i) = eps_i^(n_i) f_{0,1}(P)^(m_i).
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Any, List, Optional

from config import Config
from core.errors import FieldExtensionRequired, PreconditionError
from core.event_bus import emit_to
from events.events import RecursionStepRecorded
from exactnum.cyclotomic import CycElem
from exactnum.scalars import format_rat, nth_root_rational
from newton.dixmier import proportionality_constant
from newton.polygon import ORD, BivarPoly, top_part
from pipeline.ode import PairShape
from weyl.weyl_op import WeylOp

logger = logging.getLogger(__name__)


class Verdict(Enum):
    ZERO = "zero"
    ORDER_BELOW_ONE = "order below 1"
    NOT_PROPORTIONAL = "tops not proportional"
    FIELD_EXTENSION = "field extension required"
    MAX_STEPS = "max steps reached"


class Exponents(Enum):
    REDUCED = "reduced"     # n = p / GCD(p, ord Q_i), m = ord Q_i / GCD(p, ord Q_i)
    FULL = "full"           # n = ord P, m = ord Q_i


@dataclass
class RecursionStep:
    index: int
    F: BivarPoly
    Q: WeylOp
    order: Optional[int]            # None for the zero operator
    M: Optional[int] = None
    n: Optional[int] = None
    m: Optional[int] = None
    epsilon: Any = None
    divisible_by_d2: Optional[bool] = None


@dataclass
class RecursionTrace:
    p: int
    steps: List[RecursionStep] = field(default_factory=list)
    verdict: Optional[Verdict] = None
    detail: str = ""

    @property
    def last(self) -> RecursionStep:
        return self.steps[-1]

    def orders(self) -> List[Optional[int]]:
        return [s.order for s in self.steps]

    def to_json(self):
        out = []
        for s in self.steps:
            eps = s.epsilon
            if eps is not None:
                eps = format_rat(eps) if not isinstance(eps, CycElem) else str(eps)
            out.append({"index": s.index, "F": str(s.F), "Q": str(s.Q), "ord": s.order, "M": s.M,
                        "n": s.n, "m": s.m, "epsilon": eps, "divisible_by_d2": s.divisible_by_d2})
        return {"p": self.p, "verdict": self.verdict.value if self.verdict else None,
                "detail": self.detail, "steps": out}


def _root(c: Any, n: int):
    if n == 1:
        return c
    if isinstance(c, CycElem):
        if not c.is_rational():
            raise FieldExtensionRequired(str(c), n)
        c = c.to_rat()
    return nth_root_rational(c, n)


def fi_recursion(P: WeylOp, Q: WeylOp, max_steps: Optional[int] = None,
                 exponents: Exponents = Exponents.REDUCED, shape: Optional[PairShape] = None,
                 bus=None) -> RecursionTrace:
    """
    Run the sequence until Q_i vanishes, its order drops below 1, the
    ord-tops stop being proportional, or max_steps subtractions were made.
    """
    if max_steps is None:
        max_steps = Config.get("max_steps", 64)
    exponents = Exponents(exponents)
    if P.is_zero() or P.d_degree() < 1:
        raise PreconditionError("fi_recursion needs ord(P) >= 1")
    p = P.d_degree()
    trace = RecursionTrace(p)
    top_p = top_part(P, ORD)
    F = BivarPoly.y()
    Qi = Q
    M = p + (Q.d_degree() if Q else 0)
    for index in range(max_steps + 1):
        order = Qi.d_degree() if Qi else None
        step = RecursionStep(index, F, Qi, order, M)
        if shape is not None and order is not None:
            step.divisible_by_d2 = order % shape.d2 == 0
        trace.steps.append(step)
        if Qi.is_zero():
            trace.verdict = Verdict.ZERO
            break
        if order < 1:
            trace.verdict = Verdict.ORDER_BELOW_ONE
            break
        if index == max_steps:
            trace.verdict = Verdict.MAX_STEPS
            break
        if exponents is Exponents.REDUCED:
            g = gcd(p, order)
            n, m = p // g, order // g
        else:
            n, m = p, order
        c = proportionality_constant(top_part(Qi, ORD) ** n, top_p ** m)
        if c is None:
            trace.verdict = Verdict.NOT_PROPORTIONAL
            trace.detail = f"f_(0,1)(Q_{index})^{n} is not proportional to f_(0,1)(P)^{m}"
            break
        try:
            eps = _root(c, n)
        except FieldExtensionRequired as exc:
            trace.verdict = Verdict.FIELD_EXTENSION
            trace.detail = str(exc)
            break
        step.n, step.m, step.epsilon = n, m, eps
        emit_to(bus, RecursionStepRecorded(index=index, order=order, n=n, m=m, epsilon=eps))
        logger.debug("step %d: ord=%d n=%d m=%d eps=%s", index, order, n, m, eps)
        F = F ** n - BivarPoly.monomial(m, 0, c)
        Qi = Qi ** n - P ** m * c
        next_order = Qi.d_degree() if Qi else 0
        M = next_order - (order * n - M)
    logger.info("recursion finished after %d steps: %s", len(trace.steps), trace.verdict.value)
    return trace


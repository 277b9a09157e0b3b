# newton/dixmier.py
"""
Dixmier's laws for the top parts of products and commutators.

For a weight w with sigma + rho > 0, v = v_w(P), u = v_w(Q):
    f_w(PQ) = f_w(P) f_w(Q),  v_w(PQ) = v + u
    [P, Q] = T + U with T homogeneous of level v + u - sigma - rho and
    v_w(U) below that level; T corresponds to BRACKET_SIGN * {f_w(P), f_w(Q)}.
"""
import logging
from dataclasses import dataclass
from typing import Any, Optional

from core.errors import PreconditionError
from exactnum.scalars import Rat
from newton.polygon import BivarPoly, Weight, poisson, top_part, weight_degree
from weyl.weyl_op import WeylOp, commutator, weyl_mul

logger = logging.getLogger(__name__)

# [d, x] = 1 while {y, x} = -1
BRACKET_SIGN = -1


@dataclass(frozen=True)
class DixmierReport:
    v: Rat
    w: Rat
    level: Rat
    u_below: bool          # v_w(U) < level (vacuous when U = 0)
    bracket_law: bool      # symbol of T == BRACKET_SIGN * {f1, g1}
    product_law: bool      # f_w(PQ) == f1 g1 and v_w(PQ) == v + w
    t_zero: bool
    poisson_zero: bool

    @property
    def ok(self) -> bool:
        return self.u_below and self.bracket_law and self.product_law


def dixmier_split(P: WeylOp, Q: WeylOp, weight: Weight):
    """
    :returns: (T, U, DixmierReport)
    """
    if weight.sigma + weight.rho <= 0:
        raise PreconditionError(f"weight {weight} needs sigma + rho > 0")
    if P.is_zero() or Q.is_zero():
        raise PreconditionError("Dixmier split of a zero operator")
    v = weight_degree(P, weight).value
    w = weight_degree(Q, weight).value
    level = v + w - weight.sigma - weight.rho
    bracket = commutator(P, Q)
    T = WeylOp({k: c for k, c in bracket.items() if weight.value(k) == level})
    U = bracket - T

    f1, g1 = top_part(P, weight), top_part(Q, weight)
    pb = poisson(f1, g1)
    u_below = U.is_zero() or weight_degree(U, weight).value < level
    bracket_law = BivarPoly.from_weyl(T) == pb * BRACKET_SIGN
    product = weyl_mul(P, Q)
    product_law = (top_part(product, weight) == f1 * g1
                   and weight_degree(product, weight).value == v + w)
    report = DixmierReport(v, w, level, u_below, bracket_law, product_law, T.is_zero(), pb.is_zero())
    logger.debug("dixmier split at %s: level %s, T=%s", weight, level, T)
    return T, U, report


def proportionality_constant(a: BivarPoly, b: BivarPoly) -> Optional[Any]:
    """c with a = c b, or None; both must be nonzero."""
    if a.is_zero() or b.is_zero():
        return None
    if set(a.support()) != set(b.support()):
        return None
    ratio = None
    for key, c in a.items():
        r = c / b.coeff(*key)
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
    return ratio


def _proportional(a: BivarPoly, b: BivarPoly) -> bool:
    return proportionality_constant(a, b) is not None


def proportional_tops(f1: BivarPoly, g1: BivarPoly, v: int, w: int) -> bool:
    """
    Whether g1^v = c f1^w for a nonzero scalar c; negative exponents are
    moved to the other side.
    """
    v, w = int(v), int(w)
    left = g1 ** max(v, 0) * f1 ** max(-w, 0)
    right = f1 ** max(w, 0) * g1 ** max(-v, 0)
    return _proportional(left, right)

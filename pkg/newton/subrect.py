# newton/subrect.py
"""
Subrectangular operators: the Newton polygon sits in the rectangle
spanned by a single vertex (l, k), l, k >= 1, which is the highest
monomial Hm.
"""
import logging
from dataclasses import dataclass
from math import gcd
from typing import Optional, Tuple, Union

from sympy.polys.domains import QQ

from core.errors import PreconditionError
from exactnum.scalars import Rat
from newton.polygon import ORD, ORD_X, Point, Weight, monomial_check, top_part, weight_degree
from weyl.weyl_op import WeylOp

logger = logging.getLogger(__name__)


def highest_monomial(P: WeylOp) -> Optional[Point]:
    """(v_{1,0}, v_{0,1}) when that point is in the support and both are >= 1."""
    if P.is_zero():
        return None
    l = weight_degree(P, ORD_X).value
    k = weight_degree(P, ORD).value
    point = (int(l), int(k))
    if l < 1 or k < 1 or point not in P.terms:
        return None
    return point


def is_subrectangular(P: WeylOp) -> bool:
    return highest_monomial(P) is not None


@dataclass(frozen=True)
class SubrectData:
    hm_p: Point
    hm_q: Point
    d: int
    l: int
    n: int
    m: int
    d2: int
    epsilon: Optional[Rat]     # None when the highest monomials are not proportional


@dataclass(frozen=True)
class NotSubrectangular:
    reason: str


def subrect_data(P: WeylOp, Q: WeylOp) -> Union[SubrectData, NotSubrectangular]:
    hp, hq = highest_monomial(P), highest_monomial(Q)
    if hp is None:
        return NotSubrectangular("first operator is not of subrectangular type")
    if hq is None:
        return NotSubrectangular("second operator is not of subrectangular type")
    d = gcd(hp[1], hq[1])
    l = gcd(hp[0], hq[0])
    n, m = hp[1] // d, hq[1] // d
    d2 = d // gcd(l, d)
    epsilon = None
    if hp[0] * hq[1] == hq[0] * hp[1]:
        epsilon = QQ(hp[1], hq[1])
    return SubrectData(hp, hq, d, l, n, m, d2, epsilon)


def ess_gcd(P: WeylOp, Q: WeylOp) -> int:
    data = subrect_data(P, Q)
    if isinstance(data, NotSubrectangular):
        raise PreconditionError(data.reason)
    return data.d2


def rate(P: WeylOp, Q: WeylOp, weight: Weight) -> Rat:
    """v_w(P) / v_w(Q), the ratio of proportional top monomials."""
    if weight.sigma <= 0 or weight.rho <= 0:
        raise PreconditionError("rate needs a positive weight")
    return weight_degree(P, weight).value / weight_degree(Q, weight).value


@dataclass(frozen=True)
class Corners:
    en10: Point
    st10: Point
    en01: Point
    st01: Point


def corners(P: WeylOp) -> Corners:
    """
    en/st corners of f_{1,0}(P) = x^a h(y) and f_{0,1}(P) = g(x) y^b:
    en10 = (a, deg h), st10 = (a, val h), en01 = (val g, b), st01 = (deg g, b).
    """
    if P.is_zero():
        raise PreconditionError("corners of the zero operator")
    f10 = top_part(P, ORD_X).support()
    f01 = top_part(P, ORD).support()
    a = f10[0][0]
    b = f01[0][1]
    ys = [j for _, j in f10]
    xs = [i for i, _ in f01]
    return Corners((a, max(ys)), (a, min(ys)), (min(xs), b), (max(xs), b))


def weight_image(P: WeylOp, Q: WeylOp, F: WeylOp, weight: Weight) -> Tuple[Rat, Rat]:
    """
    Both sides of v_w(phi(F)) = (rho k + sigma l) v_{eps,1}(F) for phi(x) = P,
    phi(d) = Q, where x^l y^k = Hm(Q). Needs f_{eps,1}(F) to be a monomial.
    """
    from weyl.endo import Endo, apply_endo
    data = subrect_data(P, Q)
    if isinstance(data, NotSubrectangular) or data.epsilon is None:
        raise PreconditionError("weight image law needs a subrectangular pair with proportional tops")
    eps_weight = Weight(data.epsilon, 1)
    if not monomial_check(top_part(F, eps_weight)):
        raise PreconditionError("f_{eps,1}(F) is not a monomial")
    image = apply_endo(Endo(P, Q), F)
    lhs = weight_degree(image, weight).value
    l, k = data.hm_q
    rhs = (weight.rho * k + weight.sigma * l) * weight_degree(F, eps_weight).value
    return lhs, rhs

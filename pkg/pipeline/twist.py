# pipeline/twist.py
"""Twisting by Phi(N, lam): x -> x + lam d^N, and the top lines it produces."""
import logging
from dataclasses import dataclass
from typing import Any, Optional

from core.errors import PreconditionError
from exactnum.scalars import rat
from newton.polygon import BivarPoly, Weight, monomial_check, top_part
from newton.subrect import NotSubrectangular, ess_gcd, subrect_data
from pipeline.ode import PairShape
from weyl.endo import Endo, apply_endo, phi, tame
from weyl.weyl_op import WeylOp

logger = logging.getLogger(__name__)


def default_twist_degree(eps: Any) -> int:
    eps = rat(eps)
    return int(eps.numerator) // int(eps.denominator) + 1


@dataclass(frozen=True)
class TwistResult:
    N: int
    image: WeylOp
    top_line: BivarPoly             # f_{N,1}(Phi(F))
    eps_part: BivarPoly             # f_{eps,1}(Phi(F))
    monomial: bool
    pre_twist_top: BivarPoly        # f_{N,1}(F)

    @property
    def unique_vertex(self) -> bool:
        return monomial_check(self.pre_twist_top)


def twisted_top(F: WeylOp, lam: Any, eps: Any, N: Optional[int] = None) -> TwistResult:
    """
    :raises PreconditionError: when N <= eps, lam = 0 or F = 0
    """
    eps = rat(eps)
    if N is None:
        N = default_twist_degree(eps)
    if N <= eps:
        raise PreconditionError(f"twist degree N={N} must exceed eps={eps}")
    if not lam:
        raise PreconditionError("twist parameter must be nonzero")
    if F.is_zero():
        raise PreconditionError("twist of the zero operator")
    image = apply_endo(tame(phi(N, lam)), F)
    top_line = top_part(image, Weight(N, 1))
    eps_part = top_part(image, Weight(eps, 1))
    result = TwistResult(N, image, top_line, eps_part, monomial_check(eps_part), top_part(F, Weight(N, 1)))
    logger.debug("twist N=%d: f_(eps,1) part %s (monomial=%s)", N, eps_part, result.monomial)
    return result


@dataclass(frozen=True)
class TwistedPair:
    P_hat: WeylOp
    Q_hat: WeylOp
    N: int
    orders: tuple                   # (ord P_hat, ord Q_hat)
    predicted: Optional[tuple]      # (dm(nd + Nln), dm(md + Nlm)) from the shape
    ess_gcd: Optional[int]
    ess_gcd_before: Optional[int]

    @property
    def orders_match(self) -> bool:
        return self.predicted is None or self.orders == self.predicted

    @property
    def ess_gcd_kept(self) -> bool:
        return self.ess_gcd is not None and self.ess_gcd == self.ess_gcd_before


def twisted_pair(P: WeylOp, Q: WeylOp, lam: Any, N: Optional[int] = None,
                 shape: Optional[PairShape] = None) -> TwistedPair:
    """
    P_hat = phi(Phi(P)), Q_hat = phi(Phi(Q)) for phi(x) = P, phi(d) = Q and
    Phi = Phi(N, lam); the substitution is made in normal order.
    """
    data = subrect_data(P, Q)
    if isinstance(data, NotSubrectangular):
        raise PreconditionError(data.reason)
    if data.epsilon is None:
        raise PreconditionError("highest monomials are not proportional")
    if N is None:
        N = default_twist_degree(data.epsilon)
    if N <= data.epsilon:
        raise PreconditionError(f"twist degree N={N} must exceed eps={data.epsilon}")
    twist = tame(phi(N, lam))
    pair = Endo(P, Q)
    P_hat = apply_endo(pair, apply_endo(twist, P))
    Q_hat = apply_endo(pair, apply_endo(twist, Q))
    orders = (P_hat.d_degree(), Q_hat.d_degree())
    predicted = None
    if shape is not None:
        d, n, m, l = shape.d, shape.n, shape.m, shape.l
        predicted = (d * m * (n * d + N * l * n), d * m * (m * d + N * l * m))
    try:
        after = ess_gcd(P_hat, Q_hat)
    except PreconditionError:
        after = None
    logger.info("twisted pair N=%d: orders %s, predicted %s", N, orders, predicted)
    return TwistedPair(P_hat, Q_hat, N, orders, predicted, after, data.d2)


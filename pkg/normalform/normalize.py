# normalform/normalize.py
"""
Normalization of D1 operators by the change of variables

    Phi(x) = u,    Phi(d) = (1/u') d + v,     u(0) = 0, u'(0) != 0

which is an automorphism since [(1/u') d + v, u] = 1. u makes the head
coefficient 1, v removes the d^(p-1) coefficient.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from sympy.polys.domains import QQ

from config import Config
from core.errors import PrecisionError, PreconditionError
from exactnum.cyclotomic import CycElem
from exactnum.scalars import nth_root_rational
from exactnum.series import TruncSeries
from weyl.d1_op import D1Op, d1_mul

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VariableChange:
    u: TruncSeries
    v: TruncSeries
    precision: int

    @classmethod
    def identity(cls, precision: int) -> "VariableChange":
        return cls(TruncSeries.monomial(1, precision), TruncSeries.constant(0, precision), precision)

    def image_d(self) -> D1Op:
        """Phi(d) = w d + v with w = 1/u'."""
        if self.u[0]:
            raise PreconditionError("this change is stored with u(0) = 0; shift the operator instead")
        w = self.u.derive().inverse()
        return D1Op([self.v, w])

    def apply(self, P: D1Op) -> D1Op:
        """Phi(P) = sum a_i(u) (w d + v)^i."""
        T = self.image_d()
        power = D1Op.d_power(0, T.precision)
        out = None
        for i, a in enumerate(P.coeffs):
            if i:
                power = d1_mul(T, power)
            if a.is_zero():
                continue
            term = d1_mul(D1Op([a.compose(self.u)]), power)
            out = term if out is None else out + term
        if out is None:
            return D1Op([], min(P.precision, T.precision))
        return out

    def inverse_x(self) -> TruncSeries:
        """f = Phi^-1(x): f(0) = 0 and f' = 1 / (u' o f), so that u(f(x)) = x."""
        du = self.u.derive()
        M = self.u.precision
        f = TruncSeries.constant(0, M)
        for _ in range(M):
            nxt = du.compose(f).inverse().antiderive().truncate(M)
            if nxt == f:
                break
            f = nxt
        return f


def _rational(c):
    if isinstance(c, CycElem):
        if not c.is_rational():
            raise PreconditionError("head coefficient at 0 must be rational")
        return c.to_rat()
    return c


def normalize(P: D1Op, precision: Optional[int] = None) -> Tuple[VariableChange, D1Op]:
    """
    :returns: (Phi, Phi(P)) with Phi(P) = d^p + c_(p-2) d^(p-2) + ...
    :raises FieldExtensionRequired: when HT(P)(0) has no rational p-th root
    """
    if precision is None:
        precision = Config.get("series_precision", 16)
    p = P.order
    if p < 1:
        raise PreconditionError("normalization needs an operator of positive order")
    h = P.ht
    c = _rational(h[0])
    if not c:
        raise PreconditionError("HT(P) vanishes at 0; apply a generic shift first")
    root = nth_root_rational(c, p)
    work = min(P.precision, precision + 2 * p + 4)
    if work < 2 * p + 2:
        raise PrecisionError(f"normalizing an operator of order {p}", 2 * p + 2)
    hn = h.truncate(work) * (1 / c)

    # u' = root * (h(u) / c)^(1/p), one more coefficient per pass
    u = TruncSeries.monomial(1, work, root)
    for _ in range(work):
        nxt = (hn.compose(u).nth_root(p) * root).antiderive().truncate(work)
        if nxt == u:
            break
        u = nxt
    logger.debug("normalizing change u = %s", u)

    step = VariableChange(u, TruncSeries.constant(0, work), work)
    P1 = step.apply(P)
    b = P1.coeff(p - 1)
    w = u.derive().inverse()
    v = (w * b) * QQ(-1, p)
    change = VariableChange(u, v, min(u.precision, v.precision))
    Pnorm = change.apply(P)
    out_precision = min(precision, Pnorm.precision)
    if out_precision < 1:
        raise PrecisionError("normalized operator lost all precision", precision + 2 * p + 4)
    Pnorm = D1Op([s.truncate(min(s.precision, out_precision)) for s in Pnorm.coeffs], out_precision)
    logger.info("normalized an operator of order %d to precision %d", p, out_precision)
    return change, Pnorm

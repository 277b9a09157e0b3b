# weyl/d1_op.py
"""
D1 = K[[x]][d]: differential operators with truncated power series
coefficients. The d-degree is exact; only the x-series are truncated.
"""
import logging
from dataclasses import dataclass
from math import comb
from typing import Any, List, Sequence, Union

from sympy.polys.domains import QQ

from core.errors import PreconditionError
from exactnum.scalars import Rat
from exactnum.series import TruncSeries
from weyl.weyl_op import WeylOp

logger = logging.getLogger(__name__)


class D1Op:
    __slots__ = ("coeffs", "precision")

    def __init__(self, coeffs: Sequence[TruncSeries], precision: int = None):
        coeffs = list(coeffs)
        if precision is None:
            if not coeffs:
                raise ValueError("precision is required for the zero operator")
            precision = min(s.precision for s in coeffs)
        coeffs = [s.truncate(precision) if s.precision > precision else s for s in coeffs]
        if any(s.precision < precision for s in coeffs):
            raise ValueError("coefficient known below the operator precision")
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.coeffs = tuple(coeffs)
        self.precision = precision

    @classmethod
    def from_series(cls, coeffs: Sequence[TruncSeries]) -> "D1Op":
        return cls(coeffs)

    @classmethod
    def d_power(cls, n: int, precision: int) -> "D1Op":
        zero = TruncSeries.constant(0, precision)
        return cls([zero] * n + [TruncSeries.constant(1, precision)], precision)

    def _series(self, value: Any) -> TruncSeries:
        return TruncSeries.constant(value, self.precision)

    # access -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def order(self) -> int:
        if not self.coeffs:
            raise PreconditionError("order of the zero operator")
        return len(self.coeffs) - 1

    def coeff(self, j: int) -> TruncSeries:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return self._series(0)

    @property
    def ht(self) -> TruncSeries:
        return self.coeffs[self.order]

    def is_normalized(self) -> bool:
        n = self.order
        return self.ht == 1 and (n == 0 or self.coeff(n - 1).is_zero())

    # ring operations ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, D1Op):
            other = D1Op([self._series(other)], self.precision)
        prec = min(self.precision, other.precision)
        size = max(len(self.coeffs), len(other.coeffs))
        return D1Op([self.coeff(j).truncate(prec) + other.coeff(j).truncate(prec) for j in range(size)], prec)

    __radd__ = __add__

    def __neg__(self):
        return D1Op([-s for s in self.coeffs], self.precision)

    def __sub__(self, other):
        if not isinstance(other, D1Op):
            other = D1Op([self._series(other)], self.precision)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            other = D1Op([other])
        if not isinstance(other, D1Op):
            return D1Op([s * other for s in self.coeffs], self.precision)
        return d1_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, TruncSeries):
            return d1_mul(D1Op([other]), self)
        return D1Op([s * other for s in self.coeffs], self.precision)

    def __pow__(self, n: int):
        result = D1Op.d_power(0, self.precision)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, D1Op):
            return NotImplemented
        size = max(len(self.coeffs), len(other.coeffs))
        return all(self.coeff(j) == other.coeff(j) for j in range(size))

    __hash__ = None

    # action and conversion ----------------------------------------------

    def apply(self, f: TruncSeries) -> TruncSeries:
        """sum_j a_j f^(j); loses one order of precision per derivative."""
        out = None
        deriv = f
        for j, a in enumerate(self.coeffs):
            if j:
                deriv = deriv.derive()
            term = a * deriv
            out = term if out is None else out + term
        return out if out is not None else f * 0

    def terms(self):
        """(i, j, c) for every nonzero c x^i d^j below the precision."""
        for j, s in enumerate(self.coeffs):
            for i, c in enumerate(s.coeffs):
                if c:
                    yield i, j, c

    def __str__(self):
        if not self.coeffs:
            return f"0 [mod x^{self.precision}]"
        parts = []
        for j, s in enumerate(self.coeffs):
            if s.is_zero():
                continue
            power = "" if j == 0 else ("*d" if j == 1 else f"*d^{j}")
            parts.append(f"({s}){power}")
        return " + ".join(parts)

    def __repr__(self):
        return f"D1Op({self})"


def d1_mul(P: D1Op, Q: D1Op) -> D1Op:
    """(a d^i)(b d^j) = sum_k C(i,k) a b^(k) d^(i+j-k)."""
    prec = min(P.precision, Q.precision)
    if P.is_zero() or Q.is_zero():
        return D1Op([], prec)
    derivs: List[List[TruncSeries]] = []
    for b in Q.coeffs:
        chain = [b.truncate(prec)]
        for _ in range(P.order):
            if chain[-1].precision < 2:
                break
            chain.append(chain[-1].derive())
        derivs.append(chain)
    out = {}
    for i, a in enumerate(P.coeffs):
        if a.is_zero():
            continue
        for j, chain in enumerate(derivs):
            for k in range(i + 1):
                if k >= len(chain):
                    raise PreconditionError(f"precision {prec} too small for a product of d-order {P.order}")
                term = a * chain[k] * comb(i, k)
                key = i + j - k
                out[key] = out[key] + term if key in out else term
    result_prec = min(s.precision for s in out.values()) if out else prec
    size = max(out) + 1 if out else 0
    zero = TruncSeries.constant(0, result_prec)
    return D1Op([out.get(n, zero).truncate(result_prec) for n in range(size)], result_prec)


def from_weyl(P: WeylOp, precision: int) -> D1Op:
    """The embedding A1 -> D1."""
    if P.is_zero():
        return D1Op([], precision)
    rows = [[QQ(0)] * precision for _ in range(P.d_degree() + 1)]
    sample = None
    for (i, j), c in P.items():
        sample = c
        if i < precision:
            rows[j][i] = c
    if sample is not None and not isinstance(sample, Rat):
        zero = sample * 0
        rows = [[c if c else zero for c in row] for row in rows]
    return D1Op([TruncSeries(row, precision) for row in rows], precision)


@dataclass(frozen=True)
class LeadingData:
    ht: Any
    order: int
    monic: bool
    elliptic: bool


def leading_data(P: Union[D1Op, WeylOp]) -> LeadingData:
    """HT(P), ord(P) and the monic / formally elliptic flags."""
    if P.is_zero():
        raise PreconditionError("leading data of the zero operator")
    if isinstance(P, WeylOp):
        n = P.d_degree()
        ht = WeylOp({(i, 0): c for (i, j), c in P.items() if j == n})
        return LeadingData(ht, n, ht == WeylOp.one(), ht.x_degree() == 0)
    ht = P.ht
    elliptic = all(not c for c in ht.coeffs[1:])
    return LeadingData(ht, P.order, ht == 1, elliptic)

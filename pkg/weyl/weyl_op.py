# weyl/weyl_op.py
"""
Elements of the first Weyl algebra A1 = K[x][d] with [d, x] = 1, kept
sparse in the normal order x^i d^j.
"""
import logging
from math import comb, perm
from typing import Any, Dict, Iterator, List, Tuple

from sympy.polys.domains import QQ

from core.errors import PreconditionError
from exactnum.cyclotomic import CycElem
from exactnum.scalars import Rat, rat, is_formal

logger = logging.getLogger(__name__)

Exponent = Tuple[int, int]


def scalar(value: Any):
    """Accept Rat, CycElem and formal-parameter coefficients as they are."""
    if isinstance(value, (Rat, CycElem)) or is_formal(value):
        return value
    return rat(value)


class WeylOp:
    __slots__ = ("_terms",)

    def __init__(self, terms: Dict[Exponent, Any] = None):
        clean: Dict[Exponent, Any] = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in x^{i} d^{j}")
            c = scalar(c)
            if c:
                clean[(i, j)] = c
        self._terms = clean

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls) -> "WeylOp":
        return cls()

    @classmethod
    def one(cls) -> "WeylOp":
        return cls({(0, 0): QQ(1)})

    @classmethod
    def x(cls) -> "WeylOp":
        return cls({(1, 0): QQ(1)})

    @classmethod
    def d(cls) -> "WeylOp":
        return cls({(0, 1): QQ(1)})

    @classmethod
    def constant(cls, c: Any) -> "WeylOp":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, i: int, j: int, c: Any = 1) -> "WeylOp":
        return cls({(i, j): c})

    # access -------------------------------------------------------------

    @property
    def terms(self) -> Dict[Exponent, Any]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, Any]]:
        """Terms in canonical (lexicographic) order."""
        for key in sorted(self._terms):
            yield key, self._terms[key]

    def support(self) -> List[Exponent]:
        return sorted(self._terms)

    def coeff(self, i: int, j: int):
        return self._terms.get((i, j), QQ(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def x_degree(self) -> int:
        return max((i for i, _ in self._terms), default=0)

    def d_degree(self) -> int:
        return max((j for _, j in self._terms), default=0)

    def map_coeffs(self, fn) -> "WeylOp":
        return WeylOp({k: fn(c) for k, c in self._terms.items()})

    # ring operations ----------------------------------------------------

    def _lift(self, other: Any) -> "WeylOp":
        return other if isinstance(other, WeylOp) else WeylOp.constant(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return WeylOp(out)

    __radd__ = __add__

    def __neg__(self):
        return WeylOp({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, WeylOp):
            c = scalar(other)
            return WeylOp({k: v * c for k, v in self._terms.items()})
        return weyl_mul(self, other)

    def __rmul__(self, other):
        c = scalar(other)
        return WeylOp({k: c * v for k, v in self._terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined in A1")
        result, base = WeylOp.one(), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, WeylOp):
            try:
                other = self._lift(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset((k, str(c)) for k, c in self._terms.items()))

    # weights ------------------------------------------------------------

    def weights(self) -> Tuple[int, int, int]:
        """(ord, ord_x, bord) = (v_{0,1}, v_{1,0}, v_{1,-1}) over the support."""
        if not self._terms:
            raise PreconditionError("weights of the zero operator are undefined")
        ord_d = max(j for _, j in self._terms)
        ord_x = max(i for i, _ in self._terms)
        bord = max(j - i for i, j in self._terms)
        return ord_d, ord_x, bord

    # action on K[x] -----------------------------------------------------

    def act_monomial(self, m: int) -> Dict[int, Any]:
        """P applied to x^m as a sparse polynomial {power: coefficient}."""
        out: Dict[int, Any] = {}
        for (i, j), c in self._terms.items():
            if j > m:
                continue
            power = m - j + i
            val = c * perm(m, j)
            out[power] = out[power] + val if power in out else val
        return {p: v for p, v in out.items() if v}

    def act_on_poly(self, poly: Dict[int, Any]) -> Dict[int, Any]:
        out: Dict[int, Any] = {}
        for m, a in poly.items():
            for p, v in self.act_monomial(m).items():
                val = v * a
                out[p] = out[p] + val if p in out else val
        return {p: v for p, v in out.items() if v}

    def __str__(self):
        from weyl.text_format import format_op
        return format_op(self)

    def __repr__(self):
        return f"WeylOp({self})"


def weyl_mul(P: WeylOp, Q: WeylOp) -> WeylOp:
    """
    Normally ordered product, from d^b x^c = sum_k C(b,k) (c)_k x^(c-k) d^(b-k).
    """
    out: Dict[Exponent, Any] = {}
    for (a, b), p in P._terms.items():
        for (c, d), q in Q._terms.items():
            pq = p * q
            for k in range(min(b, c) + 1):
                key = (a + c - k, b + d - k)
                val = pq * (comb(b, k) * perm(c, k))
                out[key] = out[key] + val if key in out else val
    return WeylOp(out)


def commutator(P: WeylOp, Q: WeylOp) -> WeylOp:
    """[P, Q] = PQ - QP."""
    return weyl_mul(P, Q) - weyl_mul(Q, P)


def weights(P: WeylOp) -> Tuple[int, int, int]:
    return P.weights()

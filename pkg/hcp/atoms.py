# hcp/atoms.py
"""
Homogeneous canonical polynomials (Hcp) and their combinations (Hcpc).

An Hcp of modulus k and order r is

    [ sum f[l, i] x^l A_i d^l  +  sum g[j] B_j ] D^r

with A_i = A_{k;i}, B_j = x^(j-1) delta d^(j-1) / (j-1)!, D^r = d^r for
r >= 0 and the r-fold integral otherwise. The bracket acts diagonally on
K[x]:

    x^l A_i d^l  x^n = xi^(i (n - l)) (n)_l x^n,     B_j x^n = [n = j - 1] x^n

so products are computed on these diagonal symbols: move D^a past a
diagonal factor by shifting its argument by a, combine the D-powers with
d^a int^v = D^(a-v) and int^u d^b = (1 - B_1 - ... - B_u) D^(b-u), then
multiply the symbols pointwise.
"""
import logging
from contextlib import contextmanager
from contextvars import ContextVar
from math import comb, factorial
from typing import Any, Dict, Iterable, Iterator, List, Optional, Tuple

from sympy.functions.combinatorial.numbers import stirling

from core.errors import FieldMismatchError, PreconditionError
from exactnum.cyclotomic import CycElem, CycField, cyclotomic_field
from weyl.weyl_op import WeylOp

logger = logging.getLogger(__name__)

NEG_INF = float("-inf")

# flips one coefficient of the int^u d^b correction; used by the lemma suite self-test
_CORRUPT_REWRITE: ContextVar[bool] = ContextVar("corrupt_rewrite", default=False)


@contextmanager
def corrupted_rewriting():
    token = _CORRUPT_REWRITE.set(True)
    try:
        yield
    finally:
        _CORRUPT_REWRITE.reset(token)


def falling(a: int, m: int) -> int:
    """(a)_m = a (a-1) ... (a-m+1); any integer a."""
    out = 1
    for t in range(m):
        out *= a - t
    return out


class Hcp:
    __slots__ = ("k", "r", "xa", "b")

    def __init__(self, k: int, r: int, xa: Dict[Tuple[int, int], Any] = None, b: Dict[int, Any] = None):
        if k < 1:
            raise PreconditionError("modulus must be positive")
        field = cyclotomic_field(k)
        clean_xa: Dict[Tuple[int, int], CycElem] = {}
        for (l, i), c in (xa or {}).items():
            if l < 0:
                raise PreconditionError(f"negative x-degree {l} in an atom")
            key = (l, i % k)
            c = field.convert(c)
            if key in clean_xa:
                c = clean_xa[key] + c
            clean_xa[key] = c
        clean_b: Dict[int, CycElem] = {}
        for j, c in (b or {}).items():
            if j <= 0 or (r < 0 and j <= -r):
                continue
            c = field.convert(c)
            if j in clean_b:
                c = clean_b[j] + c
            clean_b[j] = c
        self.k = k
        self.r = r
        self.xa = {key: c for key, c in clean_xa.items() if c}
        self.b = {j: c for j, c in clean_b.items() if c}

    @property
    def field(self) -> CycField:
        return cyclotomic_field(self.k)

    @classmethod
    def zero(cls, k: int, r: int = 0) -> "Hcp":
        return cls(k, r)

    @classmethod
    def scalar(cls, k: int, c: Any = 1) -> "Hcp":
        return cls(k, 0, {(0, 0): c})

    def is_zero(self) -> bool:
        return not self.xa and not self.b

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, Hcp):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return (self.k, self.r, self.xa, self.b) == (other.k, other.r, other.xa, other.b)

    __hash__ = None

    def _check(self, other: "Hcp"):
        if other.k != self.k:
            raise FieldMismatchError(f"modulus {self.k} against modulus {other.k}; rescale first")

    def __add__(self, other: "Hcp") -> "Hcp":
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if other.r != self.r:
            raise PreconditionError("adding Hcp values of different orders; use Hcpc")
        xa = dict(self.xa)
        for key, c in other.xa.items():
            xa[key] = xa[key] + c if key in xa else c
        b = dict(self.b)
        for j, c in other.b.items():
            b[j] = b[j] + c if j in b else c
        return Hcp(self.k, self.r, xa, b)

    def __neg__(self):
        return Hcp(self.k, self.r, {key: -c for key, c in self.xa.items()}, {j: -c for j, c in self.b.items()})

    def __sub__(self, other: "Hcp") -> "Hcp":
        return self + (-other)

    def scale(self, c: Any) -> "Hcp":
        c = self.field.convert(c)
        return Hcp(self.k, self.r, {key: v * c for key, v in self.xa.items()}, {j: v * c for j, v in self.b.items()})

    def __mul__(self, other):
        if isinstance(other, Hcp):
            return hcp_atom_mul(self, other)
        if isinstance(other, Hcpc):
            return Hcpc.from_hcp(self) * other
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def sdeg_a(self):
        return max((l for l, _ in self.xa), default=NEG_INF)

    def sdeg_b(self):
        return max(self.b, default=NEG_INF)

    def a_indices(self) -> List[int]:
        return sorted({i for _, i in self.xa})

    def to_hcpc(self) -> "Hcpc":
        return Hcpc.from_hcp(self)

    def __str__(self):
        from hcp.text import format_hcp
        return format_hcp(self)

    def __repr__(self):
        return f"Hcp({self})"


class Hcpc:
    """Finite sum of Hcp values of distinct orders, all of one modulus."""

    __slots__ = ("k", "comps")

    def __init__(self, k: int, comps: Iterable[Hcp] = ()):
        self.k = k
        merged: Dict[int, Hcp] = {}
        for H in comps:
            if H.k != k:
                raise FieldMismatchError(f"component of modulus {H.k} in an Hcpc of modulus {k}")
            if H.is_zero():
                continue
            merged[H.r] = merged[H.r] + H if H.r in merged else H
        self.comps: Dict[int, Hcp] = {r: H for r, H in merged.items() if not H.is_zero()}

    @classmethod
    def from_hcp(cls, H: Hcp) -> "Hcpc":
        return cls(H.k, [H])

    @classmethod
    def zero(cls, k: int) -> "Hcpc":
        return cls(k)

    @classmethod
    def one(cls, k: int) -> "Hcpc":
        return cls(k, [Hcp.scalar(k, 1)])

    @property
    def field(self) -> CycField:
        return cyclotomic_field(self.k)

    def component(self, r: int) -> Hcp:
        return self.comps.get(r, Hcp.zero(self.k, r))

    def orders(self) -> List[int]:
        return sorted(self.comps)

    def is_zero(self) -> bool:
        return not self.comps

    def __bool__(self):
        return bool(self.comps)

    def __iter__(self) -> Iterator[Hcp]:
        for r in sorted(self.comps):
            yield self.comps[r]

    def _lift(self, other) -> "Hcpc":
        if isinstance(other, Hcpc):
            if other.k != self.k:
                raise FieldMismatchError(f"modulus {self.k} against modulus {other.k}; rescale first")
            return other
        if isinstance(other, Hcp):
            if other.k != self.k:
                raise FieldMismatchError(f"modulus {self.k} against modulus {other.k}; rescale first")
            return Hcpc.from_hcp(other)
        return Hcpc(self.k, [Hcp.scalar(self.k, other)])

    def __add__(self, other):
        other = self._lift(other)
        return Hcpc(self.k, list(self.comps.values()) + list(other.comps.values()))

    __radd__ = __add__

    def __neg__(self):
        return Hcpc(self.k, [-H for H in self.comps.values()])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (Hcpc, Hcp)):
            return Hcpc(self.k, [H.scale(other) for H in self.comps.values()])
        other = self._lift(other)
        return hcp_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, Hcp):
            return hcp_mul(self._lift(other), self)
        return Hcpc(self.k, [H.scale(other) for H in self.comps.values()])

    def __pow__(self, n: int):
        result, base = Hcpc.one(self.k), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Hcp):
            other = Hcpc(other.k, [other])
        if not isinstance(other, Hcpc):
            try:
                other = self._lift(other)
            except (TypeError, ValueError):
                return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.k == other.k and self.comps.keys() == other.comps.keys() and all(
            self.comps[r] == other.comps[r] for r in self.comps)

    __hash__ = None

    def __str__(self):
        from hcp.text import format_hcpc
        return format_hcpc(self)

    def __repr__(self):
        return f"Hcpc({self})"


# diagonal symbols ------------------------------------------------------

class _Diag:
    """sum c[i, l] xi^(i n) (n)_l + sum g[j] [n = j - 1], as a function of n."""

    __slots__ = ("exp", "ind")

    def __init__(self, exp: Dict[Tuple[int, int], CycElem] = None, ind: Dict[int, CycElem] = None):
        self.exp = exp or {}
        self.ind = ind or {}


def _add_to(target: Dict, key, value):
    if key in target:
        target[key] = target[key] + value
    else:
        target[key] = value


def _to_diag(H: Hcp) -> _Diag:
    field = H.field
    exp = {(i, l): c * field.xi_power(-i * l) for (l, i), c in H.xa.items()}
    return _Diag(exp, dict(H.b))


def _from_diag(k: int, r: int, D: _Diag) -> Hcp:
    field = cyclotomic_field(k)
    xa = {(l, i): c * field.xi_power(i * l) for (i, l), c in D.exp.items()}
    return Hcp(k, r, xa, D.ind)


def _exp_value(D: _Diag, field: CycField, n: int) -> CycElem:
    out = field.zero
    for (i, l), c in D.exp.items():
        ff = falling(n, l)
        if ff:
            out = out + c * field.xi_power(i * n) * ff
    return out


def _diag_value(D: _Diag, field: CycField, n: int) -> CycElem:
    val = _exp_value(D, field, n)
    if n + 1 in D.ind:
        val = val + D.ind[n + 1]
    return val


def _shift(D: _Diag, a: int, field: CycField) -> _Diag:
    """The symbol n -> D(n + a), Vandermonde on the falling factorials."""
    if a == 0:
        return D
    exp: Dict[Tuple[int, int], CycElem] = {}
    for (i, l), c in D.exp.items():
        base = c * field.xi_power(i * a)
        for t in range(l + 1):
            coef = comb(l, t) * falling(a, l - t)
            if coef:
                _add_to(exp, (i, t), base * coef)
    ind = {j - a: g for j, g in D.ind.items() if j - a >= 1}
    return _Diag(exp, ind)


def _pointwise(D1: _Diag, D2: _Diag, field: CycField, k: int) -> _Diag:
    exp: Dict[Tuple[int, int], CycElem] = {}
    for (i1, l1), c1 in D1.exp.items():
        for (i2, l2), c2 in D2.exp.items():
            c = c1 * c2
            i3 = (i1 + i2) % k
            for t in range(min(l1, l2) + 1):
                _add_to(exp, (i3, l1 + l2 - t), c * (comb(l1, t) * comb(l2, t) * factorial(t)))
    ind: Dict[int, CycElem] = {}
    for j, g in D2.ind.items():
        val = _exp_value(D1, field, j - 1)
        if val:
            _add_to(ind, j, val * g)
    for j, g in D1.ind.items():
        val = _exp_value(D2, field, j - 1)
        if val:
            _add_to(ind, j, g * val)
        if j in D2.ind:
            _add_to(ind, j, g * D2.ind[j])
    return _Diag(exp, ind)


def _combine_powers(a: int, b: int, field: CycField) -> Tuple[Optional[_Diag], int]:
    """D^a D^b = C D^(a+b) with C = 1 except for int^u d^b."""
    if a >= 0 or b < 0:
        return None, a + b
    u = -a
    last = u - 1 if _CORRUPT_REWRITE.get() else u
    correction = _Diag({(0, 0): field.one}, {j: -field.one for j in range(1, last + 1)})
    return correction, a + b


def hcp_atom_mul(H: Hcp, M: Hcp) -> Hcp:
    if H.k != M.k:
        raise FieldMismatchError(f"modulus {H.k} against modulus {M.k}; rescale first")
    k, field = H.k, H.field
    if H.is_zero() or M.is_zero():
        return Hcp.zero(k, H.r + M.r)
    shifted = _shift(_to_diag(M), H.r, field)
    symbol = _pointwise(_to_diag(H), shifted, field, k)
    correction, r = _combine_powers(H.r, M.r, field)
    if correction is not None:
        symbol = _pointwise(symbol, correction, field, k)
    return _from_diag(k, r, symbol)


def hcp_mul(H: Hcpc, M: Hcpc) -> Hcpc:
    """Product of combinations; component orders add."""
    if H.k != M.k:
        raise FieldMismatchError(f"modulus {H.k} against modulus {M.k}; rescale first")
    parts = []
    for A in H.comps.values():
        for B in M.comps.values():
            parts.append(hcp_atom_mul(A, B))
    return Hcpc(H.k, parts)


def hcp_commutator(H: Hcpc, M: Hcpc) -> Hcpc:
    return hcp_mul(H, M) - hcp_mul(M, H)


def symbol_terms(H: Hcp) -> Dict[Tuple[int, int], CycElem]:
    """The symbol of H without its B part as {(i, l): c}, meaning sum c xi^(i n) (n)_l."""
    return dict(_to_diag(H).exp)


def eval_symbol(H: Hcp, n: int, include_b: bool = True) -> CycElem:
    """Eigenvalue of the bracket of H on x^n; include_b=False drops the B_j part."""
    D = _to_diag(H)
    if include_b:
        return _diag_value(D, H.field, n)
    return _exp_value(D, H.field, n)


# moduli and degrees ----------------------------------------------------

def rescale(H, new_k: int):
    """Re-express an Hcp or Hcpc of modulus a in modulus b, a | b: A_{a;i} = A_{b;i*b/a}."""
    if isinstance(H, Hcpc):
        return Hcpc(new_k, [rescale(C, new_k) for C in H.comps.values()])
    if new_k % H.k:
        raise PreconditionError(f"modulus {H.k} does not divide {new_k}")
    step = new_k // H.k
    target = cyclotomic_field(new_k)
    xa = {(l, i * step): target.embed(c) for (l, i), c in H.xa.items()}
    b = {j: target.embed(c) for j, c in H.b.items()}
    return Hcp(new_k, H.r, xa, b)


def sdeg(H) -> Tuple[Any, Any]:
    """(Sdeg_A, Sdeg_B) over all components; -inf when absent."""
    comps = H.comps.values() if isinstance(H, Hcpc) else [H]
    comps = list(comps)
    sa = max((C.sdeg_a() for C in comps), default=NEG_INF)
    sb = max((C.sdeg_b() for C in comps), default=NEG_INF)
    return sa, sb


def bord(H: Hcpc):
    """Order of the top nonzero component."""
    if H.is_zero():
        raise PreconditionError("order of the zero combination")
    return max(H.comps)


# constructors ----------------------------------------------------------

def embed_monomial(i: int, j: int, k: int = 1, c: Any = 1) -> Hcp:
    """x^i d^j = x^i d^i D^(j - i), exact since d int = 1."""
    if i < 0 or j < 0:
        raise PreconditionError("monomial exponents must be non-negative")
    return Hcp(k, j - i, {(i, 0): c})


def embed_weyl(P: WeylOp, k: int = 1) -> Hcpc:
    field = cyclotomic_field(k)
    return Hcpc(k, [embed_monomial(i, j, k, field.convert(c)) for (i, j), c in P.items()])


def gamma(j: int, k: int = 1) -> Hcp:
    """Gamma_j = (x d)^j = sum_l S(j, l) x^l d^l."""
    if j < 0:
        return Hcp.zero(k)
    return Hcp(k, 0, {(l, 0): int(stirling(j, l)) for l in range(j + 1)})


def a_op(i: int, k: int) -> Hcp:
    return Hcp(k, 0, {(0, i): 1})


def b_op(j: int, k: int = 1) -> Hcp:
    return Hcp(k, 0, b={j: 1})


def d_power(r: int, k: int = 1) -> Hcp:
    """D^r."""
    return Hcp(k, r, {(0, 0): 1})


def to_weyl(H: Hcpc) -> WeylOp:
    """The Weyl operator of a differential combination; PreconditionError otherwise."""
    terms = {}
    for C in H.comps.values():
        if C.b:
            raise PreconditionError("combination contains B_j")
        for (l, i), c in C.xa.items():
            if i != 0:
                raise PreconditionError("combination contains A_i with i != 0")
            if l + C.r < 0:
                raise PreconditionError("combination contains an integral tail")
            terms[(l, l + C.r)] = c.to_rat() if c.is_rational() else c
    return WeylOp(terms)


def is_differential(H: Hcpc) -> bool:
    try:
        to_weyl(H)
    except PreconditionError:
        return False
    return True

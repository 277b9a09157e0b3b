# normalform/graded.py
"""
Order-graded, depth-truncated operators: P = sum P_m with each P_m an Hcp
of order m, known for all m >= lo. top is the highest nonzero order and
depth = top - lo + 1; a value that is zero on its whole window keeps
top = lo - 1 and depth 0.
"""
import json
import logging
from typing import Any, Dict, Iterable, Iterator, List, Union

from sympy.polys.domains import QQ

from core.errors import DepthError, FieldMismatchError, ParseError, PrecisionError, PreconditionError
from exactnum.cyclotomic import cyclotomic_field
from exactnum.series import TruncSeries
from hcp.action import act
from hcp.atoms import Hcp, Hcpc, embed_monomial, embed_weyl, hcp_atom_mul, rescale
from hcp.text import format_hcp, hcp_from_json, hcp_to_json
from weyl.d1_op import D1Op
from weyl.weyl_op import WeylOp

logger = logging.getLogger(__name__)


class GradedOp:
    __slots__ = ("k", "comps", "lo")

    def __init__(self, k: int, comps: Union[Dict[int, Hcp], Iterable[Hcp]] = (), lo: int = 0):
        if isinstance(comps, dict):
            comps = comps.values()
        merged: Dict[int, Hcp] = {}
        for H in comps:
            if H.k != k:
                raise FieldMismatchError(f"component of modulus {H.k} in a graded operator of modulus {k}")
            if H.r < lo or H.is_zero():
                continue
            merged[H.r] = merged[H.r] + H if H.r in merged else H
        self.k = k
        self.lo = lo
        self.comps: Dict[int, Hcp] = {r: H for r, H in merged.items() if not H.is_zero()}

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, k: int, lo: int) -> "GradedOp":
        return cls(k, (), lo)

    @classmethod
    def one(cls, k: int, depth: int) -> "GradedOp":
        return cls(k, [Hcp.scalar(k, 1)], 1 - depth)

    @classmethod
    def d_power(cls, r: int, k: int, depth: int) -> "GradedOp":
        return cls(k, [Hcp(k, r, {(0, 0): 1})], r - depth + 1)

    @classmethod
    def from_hcpc(cls, H: Hcpc, depth: int) -> "GradedOp":
        top = max(H.orders(), default=0)
        return cls(H.k, H.comps, top - depth + 1)

    @classmethod
    def from_weyl(cls, P: WeylOp, k: int, depth: int) -> "GradedOp":
        return cls.from_hcpc(embed_weyl(P, k), depth)

    @classmethod
    def from_d1(cls, P: D1Op, k: int = 1) -> "GradedOp":
        """
        A D1 operator of d-degree n known mod x^M: every missing term
        x^i d^j has i >= M, so the operator is known for orders > n - M.
        """
        if P.is_zero():
            return cls.zero(k, 1 - P.precision)
        field = cyclotomic_field(k)
        lo = P.order - P.precision + 1
        parts = [embed_monomial(i, j, k, field.convert(c)) for i, j, c in P.terms()]
        return cls(k, parts, lo)

    # access -------------------------------------------------------------

    @property
    def top(self) -> int:
        return max(self.comps) if self.comps else self.lo - 1

    @property
    def depth(self) -> int:
        return self.top - self.lo + 1

    def is_zero(self) -> bool:
        return not self.comps

    def __bool__(self):
        return bool(self.comps)

    def component(self, m: int) -> Hcp:
        if m < self.lo:
            raise DepthError(f"component of order {m} is below the known window", self.top - m + 1)
        return self.comps.get(m, Hcp.zero(self.k, m))

    def symbol(self) -> Hcp:
        if not self.comps:
            raise PreconditionError("symbol of an operator that vanishes on its known window")
        return self.comps[self.top]

    def orders(self) -> List[int]:
        return sorted(self.comps, reverse=True)

    def __iter__(self) -> Iterator[Hcp]:
        for r in self.orders():
            yield self.comps[r]

    def truncate(self, depth: int) -> "GradedOp":
        lo = self.top - depth + 1
        if lo < self.lo:
            raise DepthError("truncation beyond the known window", depth)
        return GradedOp(self.k, self.comps, lo)

    def to_hcpc(self) -> Hcpc:
        return Hcpc(self.k, self.comps.values())

    # arithmetic ---------------------------------------------------------

    def _check(self, other: "GradedOp"):
        if other.k != self.k:
            raise FieldMismatchError(f"modulus {self.k} against modulus {other.k}; rescale first")

    def __add__(self, other):
        if not isinstance(other, GradedOp):
            other = GradedOp(self.k, [Hcp.scalar(self.k, other)], self.lo)
        self._check(other)
        return GradedOp(self.k, list(self.comps.values()) + list(other.comps.values()), max(self.lo, other.lo))

    __radd__ = __add__

    def __neg__(self):
        return GradedOp(self.k, [-H for H in self.comps.values()], self.lo)

    def __sub__(self, other):
        if not isinstance(other, GradedOp):
            other = GradedOp(self.k, [Hcp.scalar(self.k, other)], self.lo)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GradedOp):
            return graded_mul(self, other)
        return GradedOp(self.k, [H.scale(other) for H in self.comps.values()], self.lo)

    def __rmul__(self, other):
        return GradedOp(self.k, [H.scale(other) for H in self.comps.values()], self.lo)

    def __pow__(self, n: int):
        if n < 0:
            raise PreconditionError("negative power of a graded operator; use invert_unit")
        result = GradedOp.one(self.k, self.depth)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        """Equality on the common known window."""
        if not isinstance(other, GradedOp):
            return NotImplemented
        if other.k != self.k:
            return False
        lo = max(self.lo, other.lo)
        keys = {r for r in self.comps if r >= lo} | {r for r in other.comps if r >= lo}
        return all(self.component(r) == other.component(r) for r in keys)

    __hash__ = None

    def rescale(self, new_k: int) -> "GradedOp":
        return GradedOp(new_k, [rescale(H, new_k) for H in self.comps.values()], self.lo)

    # text ---------------------------------------------------------------

    def to_json(self) -> Dict[str, Any]:
        return {
            "modulus": self.k,
            "top": self.top,
            "depth": self.depth,
            "components": [hcp_to_json(H) for H in self],
        }

    @classmethod
    def from_json(cls, data: Any) -> "GradedOp":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            k = int(data["modulus"])
            lo = int(data["top"]) - int(data["depth"]) + 1
            comps = [hcp_from_json(c, k) for c in data["components"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad graded operator JSON: {exc}", json.dumps(data))
        return cls(k, comps, lo)

    def __str__(self):
        body = " + ".join(f"[{H.r}] {format_hcp(H).rsplit(' @', 1)[0]}" for H in self) or "0"
        return f"{body} + O(ord < {self.lo}) @{self.k}"

    def __repr__(self):
        return f"GradedOp({self})"


def graded_mul(a: GradedOp, b: GradedOp) -> GradedOp:
    """Product known for orders >= max(lo_a + top_b, top_a + lo_b); depth is the min of the two."""
    a._check(b)
    lo = max(a.lo + b.top, a.top + b.lo)
    out: Dict[int, Hcp] = {}
    for i, A in a.comps.items():
        for j, B in b.comps.items():
            m = i + j
            if m < lo:
                continue
            prod = hcp_atom_mul(A, B)
            out[m] = out[m] + prod if m in out else prod
    return GradedOp(a.k, out, lo)


def _invert_order_zero(H: Hcp) -> Hcp:
    """
    Inverse of an order-0 Hcp whose atoms carry no x^l d^l with l > 0: its
    symbol is k-periodic away from the B points, so the inverse symbol is
    periodic too and is read back through the discrete Fourier transform.
    """
    if H.r != 0:
        raise PreconditionError("leading component of a unit must have order 0")
    if any(l for l, _ in H.xa):
        raise PreconditionError("order-0 component with x^l d^l terms is not invertible among Hcp values")
    k, field = H.k, H.field
    values = []
    for s in range(k):
        v = field.zero
        for (_, i), c in H.xa.items():
            v = v + c * field.xi_power(i * s)
        if not v:
            raise PreconditionError(f"order-0 component vanishes on x^n for n = {s} mod {k}")
        values.append(v)
    inv = [v.inverse() for v in values]
    xa = {}
    for i in range(k):
        acc = field.zero
        for s in range(k):
            acc = acc + inv[s] * field.xi_power(-i * s)
        xa[(0, i)] = acc * QQ(1, k)
    b = {}
    for j, g in H.b.items():
        val = values[(j - 1) % k] + g
        if not val:
            raise PreconditionError(f"order-0 component vanishes on x^{j - 1}")
        b[j] = val.inverse() - inv[(j - 1) % k]
    return Hcp(k, 0, xa, b)


def invert_unit(S: GradedOp) -> GradedOp:
    """S^-1 by the graded Neumann recursion Y_-t = -S_0^-1 sum_{s=1..t} S_-s Y_-(t-s)."""
    if S.is_zero() or S.top != 0:
        raise PreconditionError("invert_unit needs an operator of order 0")
    y0 = _invert_order_zero(S.component(0))
    Y: Dict[int, Hcp] = {0: y0}
    for t in range(1, -S.lo + 1):
        acc = Hcp.zero(S.k, -t)
        for s in range(1, t + 1):
            Ss = S.comps.get(-s)
            Yr = Y.get(-(t - s))
            if Ss is None or Yr is None or Yr.is_zero():
                continue
            acc = acc + hcp_atom_mul(Ss, Yr)
        if not acc.is_zero():
            Y[-t] = -hcp_atom_mul(y0, acc)
    return GradedOp(S.k, Y, S.lo)


def conjugate(a: GradedOp, b: GradedOp) -> GradedOp:
    """a b a^-1."""
    return graded_mul(graded_mul(a, b), invert_unit(a))


def graded_ops(a: GradedOp, b: GradedOp, op: str = "mul") -> GradedOp:
    if op == "add":
        return a + b
    if op == "mul":
        return graded_mul(a, b)
    if op == "conjugate":
        return conjugate(a, b)
    raise PreconditionError(f"unknown graded operation {op!r}")


def endo_operator(u: TruncSeries, depth: int, k: int = 1) -> GradedOp:
    """
    The operator f(x) -> f(x + u) for u in the maximal ideal, written as
    sum_s v^s A_j d^s / s! where 1 + u'(0) = xi^j and v = u - u'(0) x.
    Its component of order -t is

        sum_{s <= t} [v^s]_{s+t} / s!  x^(s+t) A_j d^(s+t) D^(-t)
    """
    if u[0]:
        raise PreconditionError("endomorphism series must lie in the maximal ideal")
    field = cyclotomic_field(k)
    c1 = field.convert(u[1]) if u.precision > 1 else field.zero
    zeta = c1 + 1
    j = next((j for j in range(k) if field.xi_power(j) == zeta), None)
    if j is None:
        raise PreconditionError(f"1 + u'(0) = {zeta} is not a power of xi_{k}")
    if u.precision < 2 * depth - 1:
        raise PrecisionError(f"endomorphism operator of depth {depth}", 2 * depth - 1)
    v = TruncSeries([field.zero, field.zero] + [field.convert(u[n]) for n in range(2, u.precision)], u.precision)
    powers = [TruncSeries.constant(field.one, u.precision)]
    for _ in range(1, depth):
        powers.append(powers[-1] * v)
    comps = []
    fact = 1
    facts = [1]
    for s in range(1, depth):
        fact *= s
        facts.append(fact)
    for t in range(depth):
        xa = {}
        for s in range(t + 1):
            c = powers[s][s + t]
            if c:
                xa[(s + t, j)] = c * QQ(1, facts[s])
        comps.append(Hcp(k, -t, xa))
    return GradedOp(k, comps, 1 - depth)


def act_graded(G: GradedOp, f: TruncSeries) -> TruncSeries:
    """G applied to f; exact mod x^(1 - lo) since the missing orders are all below lo."""
    if G.lo > 0:
        raise DepthError("action needs every component of order >= 0", G.top + 1)
    out = act(G.to_hcpc(), f)
    return out.truncate(min(out.precision, 1 - G.lo))

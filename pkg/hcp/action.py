# hcp/action.py
"""
The left action of Hcp combinations on K[[x]] and generator words.

A word is a product g1 g2 ... gn of the generators

    x, d (or ∂), I (or ∫), delta (or δ), A_i, and scalars

written left to right and separated by spaces; x, d and I take an
optional ^e exponent. from_word multiplies the embedded generators with
the rewriting calculus, act_word applies the generators one at a time to
a truncated series. The second never touches hcp arithmetic, which makes
it the oracle for the first.
"""
import logging
import re
from math import factorial
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Union

from sympy.polys.domains import QQ

from core.errors import ParseError, PrecisionError
from exactnum.cyclotomic import CycElem, CycField, cyclotomic_field, parse_poly_in_z
from exactnum.scalars import parse_rat
from exactnum.series import TruncSeries
from hcp.atoms import Hcp, Hcpc, a_op, b_op, d_power, eval_symbol, falling

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"^(?P<name>x|d|∂|I|∫|int)(?:\^(?P<e>\d+))?$")
_A_RE = re.compile(r"^A_(?P<i>\d+)$")


@dataclass(frozen=True)
class Gen:
    """One letter of a word: kind in {x, d, I, delta, A, scalar}."""
    kind: str
    index: int = 0
    value: Any = None

    def __str__(self):
        if self.kind == "A":
            return f"A_{self.index}"
        if self.kind == "scalar":
            return str(self.value)
        return self.kind


def parse_gen_word(text: str, k: int = 1) -> List[Gen]:
    field = cyclotomic_field(k)
    word: List[Gen] = []
    for token in text.split():
        m = _TOKEN_RE.match(token)
        if m:
            kind = {"∂": "d", "∫": "I", "int": "I"}.get(m.group("name"), m.group("name"))
            word.extend([Gen(kind)] * int(m.group("e") or 1))
            continue
        if token in ("delta", "δ"):
            word.append(Gen("delta"))
            continue
        m = _A_RE.match(token)
        if m:
            word.append(Gen("A", int(m.group("i")) % k))
            continue
        if token.startswith("(") and token.endswith(")"):
            word.append(Gen("scalar", value=parse_poly_in_z(token[1:-1], field)))
            continue
        try:
            word.append(Gen("scalar", value=field.convert(parse_rat(token))))
        except ParseError:
            raise ParseError(f"unknown generator {token!r}", text)
    return word


def format_gen_word(word: Sequence[Gen]) -> str:
    return " ".join(str(g) for g in word)


def _embed_gen(g: Gen, k: int) -> Hcp:
    if g.kind == "x":
        return Hcp(k, -1, {(1, 0): 1})
    if g.kind == "d":
        return d_power(1, k)
    if g.kind == "I":
        return d_power(-1, k)
    if g.kind == "delta":
        return b_op(1, k)
    if g.kind == "A":
        return a_op(g.index, k)
    return Hcp.scalar(k, g.value)


def from_word(word: Union[str, Sequence[Gen]], k: int = 1) -> Hcpc:
    """Canonical Hcpc of the product of a generator word."""
    if isinstance(word, str):
        word = parse_gen_word(word, k)
    result = Hcpc.one(k)
    for g in word:
        result = result * _embed_gen(g, k)
    return result


# action ----------------------------------------------------------------

def _as_hcpc(H: Union[Hcp, Hcpc]) -> Hcpc:
    return H if isinstance(H, Hcpc) else Hcpc.from_hcp(H)


def act_monomial(H: Union[Hcp, Hcpc], m: int) -> Dict[int, CycElem]:
    """H applied to x^m as an exact {power: coefficient} map."""
    H = _as_hcpc(H)
    out: Dict[int, CycElem] = {}
    for C in H:
        r = C.r
        n = m - r
        if n < 0:
            continue
        if r >= 0:
            factor = falling(m, r)
            scale = C.field.from_rat(factor)
        else:
            scale = C.field.from_rat(QQ(factorial(m), factorial(n)))
        if not scale:
            continue
        val = eval_symbol(C, n) * scale
        if val:
            out[n] = out[n] + val if n in out else val
    return {n: c for n, c in out.items() if c}


def act(H: Union[Hcp, Hcpc], f: Union[TruncSeries, int]) -> TruncSeries:
    """
    H applied to a series, or to x^m when f is an int. A component of order
    r reads f up to x^(M - 1) and fills the result up to x^(M - r - 1), so
    the result is known mod x^(M - max r).
    """
    H = _as_hcpc(H)
    field = H.field
    if isinstance(f, int):
        orders = H.orders() or [0]
        precision = f + 1 + max(0, max(orders)) + max(0, -min(orders))
        f = TruncSeries.monomial(f, precision)
    top = max(H.orders(), default=0)
    out_precision = f.precision - top
    if out_precision < 1:
        raise PrecisionError(f"acting with an operator of order {top}", top + 1)
    out = [field.zero] * out_precision
    for m in range(f.precision):
        c = f[m]
        if not c:
            continue
        c = field.convert(c)
        for n, v in act_monomial(H, m).items():
            if n < out_precision:
                out[n] = out[n] + c * v
    return TruncSeries(out, out_precision)


def _apply_gen(g: Gen, f: TruncSeries, field: CycField) -> TruncSeries:
    if g.kind == "x":
        return f.mul_x()
    if g.kind == "d":
        return f.derive()
    if g.kind == "I":
        return f.antiderive()
    if g.kind == "delta":
        return TruncSeries.constant(f[0], f.precision)
    if g.kind == "A":
        return TruncSeries([f[n] * field.xi_power(g.index * n) for n in range(f.precision)], f.precision)
    return f * g.value


def act_word(word: Union[str, Sequence[Gen]], f: Union[TruncSeries, int], k: int = 1) -> TruncSeries:
    """Apply the generators right to left; an int m stands for x^m."""
    field = cyclotomic_field(k)
    if isinstance(word, str):
        word = parse_gen_word(word, k)
    if isinstance(f, int):
        f = TruncSeries.monomial(f, f + 2 * len(word) + 2, field.one)
    else:
        f = TruncSeries([field.convert(c) for c in f.coeffs], f.precision)
    for g in reversed(word):
        f = _apply_gen(g, f, field)
    return f

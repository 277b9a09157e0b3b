# exactnum/series.py
"""
Truncated power series K[[x]] mod x^M.

Coefficients are any exact scalars that support ring arithmetic with
rationals (QQ elements or cyclotomic elements). Every value carries its own
precision M and no operation reads or fabricates coefficients at or beyond
it. Precision rules:

* add, sub, mul: min of the operand precisions
* derive: M - 1, antiderive: M + 1, mul_x(s): M + s
* compose a(b): min(M_a, M_b), requires b(0) = 0
"""
import re
import logging
from typing import Any, Iterable, List, Sequence, Tuple, Union

from sympy.polys.domains import QQ

from core.errors import DivisionByZeroError, ParseError, PrecisionError, PreconditionError
from exactnum.scalars import Rat, rat, format_rat, parse_rat
from exactnum.cyclotomic import CycElem, parse_cyc

logger = logging.getLogger(__name__)


class AtLeast:
    """Valuation of a series whose stored coefficients all vanish."""

    __slots__ = ("bound",)

    def __init__(self, bound: int):
        self.bound = bound

    def __eq__(self, other):
        return isinstance(other, AtLeast) and other.bound == self.bound

    def __hash__(self):
        return hash(("AtLeast", self.bound))

    def __str__(self):
        return f">= {self.bound}"

    __repr__ = __str__


def _scalar(value: Any):
    if isinstance(value, (CycElem, Rat)):
        return value
    return rat(value)


def _zero_like(c):
    return c * QQ(0)


class TruncSeries:
    __slots__ = ("coeffs", "precision")

    def __init__(self, coeffs: Iterable[Any], precision: int = None):
        items = [_scalar(c) for c in coeffs]
        if precision is None:
            precision = len(items)
        if precision < 1:
            raise PreconditionError("series precision must be positive")
        zero = _zero_like(items[0]) if items else QQ(0)
        items = items[:precision]
        items.extend([zero] * (precision - len(items)))
        self.coeffs: Tuple[Any, ...] = tuple(items)
        self.precision = precision

    # construction -------------------------------------------------------

    @classmethod
    def constant(cls, value: Any, precision: int) -> "TruncSeries":
        return cls([value], precision)

    @classmethod
    def monomial(cls, power: int, precision: int, coeff: Any = 1) -> "TruncSeries":
        """coeff * x^power; vanishes when power >= precision."""
        c = _scalar(coeff)
        coeffs = [_zero_like(c)] * precision
        if power < precision:
            coeffs[power] = c
        return cls(coeffs, precision)

    def _zero(self):
        return _zero_like(self.coeffs[0])

    def _lift(self, other: Any) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            return other
        return TruncSeries.constant(other, self.precision)

    # access -------------------------------------------------------------

    def __getitem__(self, n: int):
        if n < 0:
            return self._zero()
        if n >= self.precision:
            raise PrecisionError(f"coefficient x^{n} of a series known mod x^{self.precision}", n + 1)
        return self.coeffs[n]

    def __len__(self):
        return self.precision

    def truncate(self, precision: int) -> "TruncSeries":
        if precision > self.precision:
            raise PrecisionError("cannot raise precision by truncation", precision)
        return TruncSeries(self.coeffs[:precision], precision)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    # ring operations ----------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        m = min(self.precision, other.precision)
        return TruncSeries([self.coeffs[i] + other.coeffs[i] for i in range(m)], m)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.precision)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            c = _scalar(other)
            return TruncSeries([a * c for a in self.coeffs], self.precision)
        m = min(self.precision, other.precision)
        out = [self._zero()] * m
        for i in range(m):
            a = self.coeffs[i]
            if not a:
                continue
            for j in range(m - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return TruncSeries(out, m)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncSeries.constant(self._zero() + 1, self.precision)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "TruncSeries":
        a0 = self.coeffs[0]
        if not a0:
            raise PreconditionError("inverting a series with zero constant term")
        inv0 = 1 / a0
        out = [inv0]
        for n in range(1, self.precision):
            acc = self._zero()
            for k in range(1, n + 1):
                if self.coeffs[k]:
                    acc = acc + self.coeffs[k] * out[n - k]
            out.append(-acc * inv0)
        return TruncSeries(out, self.precision)

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return self * other.inverse()
        c = _scalar(other)
        if not c:
            raise DivisionByZeroError("division of a series by zero")
        return self * (1 / c)

    # calculus -----------------------------------------------------------

    def derive(self) -> "TruncSeries":
        if self.precision < 2:
            raise PrecisionError("derivative of a series known mod x", 2)
        return TruncSeries([self.coeffs[n] * n for n in range(1, self.precision)], self.precision - 1)

    def antiderive(self) -> "TruncSeries":
        """Integral with zero constant term; x^m -> x^(m+1)/(m+1)."""
        out = [self._zero()]
        out.extend(c * QQ(1, n + 1) for n, c in enumerate(self.coeffs))
        return TruncSeries(out, self.precision + 1)

    def mul_x(self, shift: int = 1) -> "TruncSeries":
        return TruncSeries([self._zero()] * shift + list(self.coeffs), self.precision + shift)

    def compose(self, inner: "TruncSeries") -> "TruncSeries":
        """self(inner); inner must lie in the maximal ideal."""
        if inner.coeffs[0]:
            raise PreconditionError("composition with a series of nonzero constant term")
        m = min(self.precision, inner.precision)
        inner = inner.truncate(m)
        result = TruncSeries.constant(self.coeffs[m - 1], m)
        for n in range(m - 2, -1, -1):
            result = result * inner + self.coeffs[n]
        return result

    def power(self, alpha: Any) -> "TruncSeries":
        """s^alpha for rational alpha, s(0) = 1, by the recurrence from s r' = alpha s' r."""
        if self.coeffs[0] != 1:
            raise PreconditionError("rational powers need a series with constant term 1")
        alpha = rat(alpha)
        out = [self.coeffs[0]]
        for n in range(1, self.precision):
            acc = self._zero()
            for k in range(1, n + 1):
                if self.coeffs[k]:
                    acc = acc + self.coeffs[k] * out[n - k] * ((alpha + 1) * k - n)
            out.append(acc * QQ(1, n))
        return TruncSeries(out, self.precision)

    def nth_root(self, d: int) -> "TruncSeries":
        if d < 1:
            raise PreconditionError("root degree must be positive")
        if self.coeffs[0] != 1:
            raise PreconditionError("series roots need constant term 1; pass the root of c(0) separately")
        return self.power(QQ(1, d))

    def exp(self) -> "TruncSeries":
        if self.coeffs[0]:
            raise PreconditionError("exp of a series with nonzero constant term")
        out = [self._zero() + 1]
        for n in range(1, self.precision):
            acc = self._zero()
            for k in range(1, n + 1):
                if self.coeffs[k]:
                    acc = acc + self.coeffs[k] * out[n - k] * k
            out.append(acc * QQ(1, n))
        return TruncSeries(out, self.precision)

    def valuation(self) -> Union[int, AtLeast]:
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return AtLeast(self.precision)

    # comparison and text ------------------------------------------------

    def __eq__(self, other):
        """Coefficientwise equality on the common precision."""
        if not isinstance(other, TruncSeries):
            try:
                other = self._lift(other)
            except (TypeError, ValueError):
                return NotImplemented
        m = min(self.precision, other.precision)
        return all(self.coeffs[i] == other.coeffs[i] for i in range(m))

    __hash__ = None

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        return f"TruncSeries({self})"


def _format_coeff(c) -> Tuple[int, str]:
    if isinstance(c, CycElem):
        if c.is_rational():
            c = c.to_rat()
        else:
            return 1, str(c)
    return (1 if c > 0 else -1), format_rat(abs(c))


def format_series(s: TruncSeries) -> str:
    parts: List[str] = []
    for n, c in enumerate(s.coeffs):
        if not c:
            continue
        sign, mag = _format_coeff(c)
        if n == 0:
            body = mag
        else:
            power = "x" if n == 1 else f"x^{n}"
            body = power if mag == "1" else f"{mag}*{power}"
        if not parts:
            parts.append(body if sign > 0 else f"-{body}")
        else:
            parts.append(("+ " if sign > 0 else "- ") + body)
    parts.append(("+ " if parts else "") + f"O(x^{s.precision})")
    return " ".join(parts)


def split_terms(text: str) -> List[Tuple[int, str]]:
    """Split a sum into signed terms, ignoring signs inside parentheses."""
    terms: List[Tuple[int, str]] = []
    depth, sign, start = 0, 1, 0
    buf = text.strip()
    i = 0
    while i < len(buf):
        ch = buf[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and buf[start:i].strip() and buf[i - 1] not in "^*/":
            terms.append((sign, buf[start:i].strip()))
            sign = 1 if ch == "+" else -1
            start = i + 1
        elif ch in "+-" and depth == 0 and not buf[start:i].strip():
            if ch == "-":
                sign = -sign
            start = i + 1
        i += 1
    if depth != 0:
        raise ParseError("unbalanced parentheses", text)
    tail = buf[start:].strip()
    if tail:
        terms.append((sign, tail))
    return terms


_SERIES_TERM_RE = re.compile(r"^(?:(?P<c>\([^()]*\)\s*@\s*\d+|\d+(?:/\d+)?)\s*\*?\s*)?(?P<x>x(?:\^(?P<n>\d+))?)?$")
_BIG_O_RE = re.compile(r"^O\(\s*x(?:\^(?P<m>\d+))?\s*\)$")


def parse_series(text: str) -> TruncSeries:
    """Parse ``c0 + c1*x + ... + O(x^M)``; the O-term is mandatory."""
    coeffs = {}
    precision = None
    for sign, term in split_terms(text):
        big_o = _BIG_O_RE.match(term)
        if big_o:
            precision = int(big_o.group("m") or 1)
            continue
        m = _SERIES_TERM_RE.match(term)
        if m is None or (m.group("c") is None and m.group("x") is None):
            raise ParseError(f"bad series term {term!r}", text)
        raw = m.group("c")
        if raw is None:
            c = QQ(1)
        elif raw.startswith("("):
            c = parse_cyc(raw)
        else:
            c = parse_rat(raw)
        n = 0
        if m.group("x"):
            n = int(m.group("n")) if m.group("n") else 1
        c = c * sign
        coeffs[n] = coeffs[n] + c if n in coeffs else c
    if precision is None:
        raise ParseError("series text needs an O(x^M) term", text)
    if any(n >= precision for n in coeffs):
        raise ParseError("term at or beyond the stated precision", text)
    sample = next(iter(coeffs.values()), QQ(0))
    zero = _zero_like(sample)
    dense = [coeffs.get(n, zero) for n in range(precision)]
    return TruncSeries(dense, precision)


def series_arith(a: TruncSeries, b: TruncSeries = None, op: str = "add") -> TruncSeries:
    """
    Dispatch for the series operations.

    :param op: one of ``add``, ``mul``, ``inv``, ``derive``, ``antiderive``
        (unary, on ``a``) or ``compose`` (``a`` after ``b``)
    """
    if op == "inv":
        return a.inverse()
    if op == "derive":
        return a.derive()
    if op == "antiderive":
        return a.antiderive()
    if b is None:
        raise PreconditionError(f"{op} needs two operands")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "compose":
        return a.compose(b)
    raise PreconditionError(f"unknown series operation {op!r}")


def series_nth_root(s: TruncSeries, d: int) -> TruncSeries:
    return s.nth_root(d)


def series_exp(s: TruncSeries) -> TruncSeries:
    return s.exp()


def valuation(s: TruncSeries) -> Union[int, AtLeast]:
    return s.valuation()


def from_poly(coeffs: Sequence[Any], precision: int) -> TruncSeries:
    """Polynomial (low to high coefficients) seen as a series mod x^precision."""
    return TruncSeries(list(coeffs), precision)

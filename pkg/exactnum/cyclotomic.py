# exactnum/cyclotomic.py
"""
Exact arithmetic in the cyclotomic fields Q(xi_k).

Elements are stored as canonical residues modulo the k-th cyclotomic
polynomial, coefficient tuple ordered from the constant term upward, so
equality of elements is equality of tuples.
"""
import re
import logging
from functools import lru_cache
from typing import Any, List, Sequence, Tuple

from sympy import cyclotomic_poly, totient
from sympy.polys.domains import QQ
from sympy.polys.densebasic import dup_strip
from sympy.polys.densearith import dup_mul, dup_rem
from sympy.polys.euclidtools import dup_invert
from sympy.polys.polyerrors import NotInvertible, CoercionFailed

from core.errors import DivisionByZeroError, FieldMismatchError, ParseError
from exactnum.scalars import Rat, rat, format_rat, parse_rat

logger = logging.getLogger(__name__)

_CONVERT_ERRORS = (TypeError, ValueError, CoercionFailed)


class CycField:
    """Q(xi_k) presented as Q[z] / Phi_k(z)."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("conductor must be positive")
        self.k = k
        poly = cyclotomic_poly(k, polys=True)
        # dense, highest degree first (sympy dup layout)
        self.modulus: List[Rat] = [QQ(int(c)) for c in poly.all_coeffs()]
        self.degree = len(self.modulus) - 1
        if self.degree != int(totient(k)):
            raise ArithmeticError(f"cyclotomic polynomial of degree {self.degree} for k={k}")
        self._powers: Tuple["CycElem", ...] = ()

    def __repr__(self):
        return f"CycField({self.k})"

    def __eq__(self, other):
        return isinstance(other, CycField) and other.k == self.k

    def __hash__(self):
        return hash(("CycField", self.k))

    # construction -------------------------------------------------------

    def from_dup(self, dup: Sequence[Rat]) -> "CycElem":
        rem = dup_rem(dup_strip(list(dup)), self.modulus, QQ)
        coeffs = [QQ(0)] * self.degree
        for idx, c in enumerate(reversed(rem)):
            coeffs[idx] = c
        return CycElem(self, tuple(coeffs))

    def from_rat(self, value: Any) -> "CycElem":
        coeffs = [QQ(0)] * self.degree
        coeffs[0] = rat(value)
        return CycElem(self, tuple(coeffs))

    def convert(self, value: Any) -> "CycElem":
        if isinstance(value, CycElem):
            if value.field != self:
                raise FieldMismatchError(f"element of Q(xi_{value.field.k}) used in Q(xi_{self.k})")
            return value
        return self.from_rat(value)

    @property
    def zero(self) -> "CycElem":
        return self.from_rat(0)

    @property
    def one(self) -> "CycElem":
        return self.from_rat(1)

    @property
    def xi(self) -> "CycElem":
        return self.xi_power(1)

    def xi_power(self, i: int) -> "CycElem":
        """xi^i, any integer i."""
        if not self._powers:
            gen = self.from_dup([QQ(1), QQ(0)])
            powers = [self.one]
            for _ in range(1, self.k):
                powers.append(powers[-1] * gen)
            self._powers = tuple(powers)
        return self._powers[i % self.k]

    def embed(self, elem: "CycElem") -> "CycElem":
        """Image of an element of Q(xi_a), a | k, under xi_a -> xi_k^(k/a)."""
        a = elem.field.k
        if self.k % a:
            raise FieldMismatchError(f"Q(xi_{a}) does not embed into Q(xi_{self.k})")
        step = self.k // a
        out = self.zero
        for j, c in enumerate(elem.coeffs):
            if c:
                out = out + self.xi_power(j * step) * c
        return out


@lru_cache(maxsize=None)
def cyclotomic_field(k: int) -> CycField:
    return CycField(k)


class CycElem:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: CycField, coeffs: Tuple[Rat, ...]):
        self.field = field
        self.coeffs = coeffs

    # helpers ------------------------------------------------------------

    def _dup(self) -> List[Rat]:
        return dup_strip(list(reversed(self.coeffs)))

    def _coerce(self, other: Any) -> "CycElem":
        if isinstance(other, CycElem):
            if other.field.k != self.field.k:
                raise FieldMismatchError(
                    f"mismatched conductors {self.field.k} and {other.field.k}")
            return other
        return self.field.from_rat(other)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rat(self) -> Rat:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except _CONVERT_ERRORS:
            return NotImplemented
        return CycElem(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycElem(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except _CONVERT_ERRORS:
            return NotImplemented
        return CycElem(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CycElem):
            other = self._coerce(other)
            return self.field.from_dup(dup_mul(self._dup(), other._dup(), QQ))
        try:
            c = rat(other)
        except _CONVERT_ERRORS:
            return NotImplemented
        return CycElem(self.field, tuple(a * c for a in self.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "CycElem":
        if not self:
            raise DivisionByZeroError("inversion of zero in a cyclotomic field")
        if self.field.degree == 1:
            return self.field.from_rat(1 / self.coeffs[0])
        try:
            inv = dup_invert(self._dup(), self.field.modulus, QQ)
        except NotInvertible:
            raise DivisionByZeroError(f"{self} is not invertible")
        return self.field.from_dup(inv)

    def __truediv__(self, other):
        if isinstance(other, CycElem):
            return self * self._coerce(other).inverse()
        try:
            c = rat(other)
        except _CONVERT_ERRORS:
            return NotImplemented
        if c == 0:
            raise DivisionByZeroError("division by zero")
        return CycElem(self.field, tuple(a / c for a in self.coeffs))

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, CycElem):
            return self.field.k == other.field.k and self.coeffs == other.coeffs
        try:
            return self.coeffs == self.field.from_rat(other).coeffs
        except _CONVERT_ERRORS:
            return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field.k, self.coeffs))

    # text ---------------------------------------------------------------

    def inner_text(self) -> str:
        """Coefficient polynomial in z without the ``@k`` suffix."""
        parts = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            mag = format_rat(abs(c))
            if j == 0:
                body = mag
            else:
                power = "z" if j == 1 else f"z^{j}"
                body = power if mag == "1" else f"{mag}*{power}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts) if parts else "0"

    def __str__(self):
        return f"({self.inner_text()})@{self.field.k}"

    def __repr__(self):
        return f"CycElem({self})"


def cyc_arith(a: CycElem, b: CycElem = None, op: str = "add") -> CycElem:
    """
    Dispatch for the three field operations.

    :param op: ``"add"``, ``"mul"`` or ``"inv"`` (inverse of ``a``; ``b`` ignored)
    """
    if op == "inv":
        return a.inverse()
    if b is None:
        raise ValueError(f"{op} needs two operands")
    if isinstance(b, CycElem) and a.field.k != b.field.k:
        raise FieldMismatchError(f"mismatched conductors {a.field.k} and {b.field.k}")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


_CYC_RE = re.compile(r"^\s*\((?P<body>[^()]*)\)\s*@\s*(?P<k>\d+)\s*$")
_TERM_RE = re.compile(r"^(?:(?P<c>\d+(?:/\d+)?)\*?)?(?P<z>z(?:\^(?P<j>\d+))?)?$")


def parse_poly_in_z(body: str, field: CycField) -> CycElem:
    """Parse ``c0 + c1*z + c2*z^2 ...`` into an element of ``field``."""
    text = body.replace(" ", "")
    if not text:
        raise ParseError("empty cyclotomic coefficient", body)
    out = field.zero
    for sign, term in re.findall(r"([+-]?)([^+-]+)", text):
        m = _TERM_RE.match(term)
        if m is None or (m.group("c") is None and m.group("z") is None):
            raise ParseError(f"bad term {term!r}", body)
        c = parse_rat(m.group("c")) if m.group("c") else QQ(1)
        if sign == "-":
            c = -c
        j = 0
        if m.group("z"):
            j = int(m.group("j")) if m.group("j") else 1
        out = out + field.xi_power(j) * c
    return out


def parse_cyc(text: str) -> CycElem:
    m = _CYC_RE.match(text)
    if m is None:
        raise ParseError(f"not a cyclotomic element: {text!r}", text)
    return parse_poly_in_z(m.group("body"), cyclotomic_field(int(m.group("k"))))


def format_cyc(value: CycElem) -> str:
    return str(value)

# exactnum/scalars.py
import re
import logging
from fractions import Fraction
from typing import Any

from sympy import Rational, integer_nthroot
from sympy.polys.domains import QQ
from sympy.polys.rings import ring, PolyElement

from core.errors import ParseError, FieldExtensionRequired

logger = logging.getLogger(__name__)

#: dtype of sympy's rational field (gmpy2.mpq when available)
Rat = QQ.dtype

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def rat(value: Any) -> Rat:
    """Convert ints, ``"a/b"`` strings, Fractions and sympy numbers to QQ."""
    if isinstance(value, Rat):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, str):
        return parse_rat(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, Rational):
        return QQ(int(value.p), int(value.q))
    return QQ.convert(value)


def parse_rat(text: str) -> Rat:
    m = _RAT_RE.match(text)
    if m is None:
        raise ParseError(f"not a rational number: {text!r}", text)
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ParseError("zero denominator", text)
    return QQ(num, den)


def format_rat(value: Rat) -> str:
    value = rat(value)
    num, den = int(value.numerator), int(value.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def nth_root_rational(c: Any, d: int) -> Rat:
    """
    Exact d-th root of a rational number.

    :raises FieldExtensionRequired: when the root is irrational
    """
    c = rat(c)
    if d < 1:
        raise ValueError("root degree must be positive")
    if c == 0:
        return QQ(0)
    sign = 1
    if c < 0:
        if d % 2 == 0:
            raise FieldExtensionRequired(format_rat(c), d)
        sign = -1
        c = -c
    num, num_exact = integer_nthroot(int(c.numerator), d)
    den, den_exact = integer_nthroot(int(c.denominator), d)
    if not (num_exact and den_exact):
        raise FieldExtensionRequired(format_rat(sign * c), d)
    return QQ(sign * int(num), int(den))


def formal_parameter(name: str = "lam") -> PolyElement:
    """
    A transcendental indeterminate over QQ, returned as the generator of
    QQ[name]; its ring is ``param.ring``.
    """
    _, gen = ring(name, QQ)
    return gen


def is_formal(value: Any) -> bool:
    return isinstance(value, PolyElement)

# weyl/text_format.py
"""
Text and JSON forms of Weyl operators and tame generators.

Operator grammar (whitespace ignored)::

    op      := ["-"] term (("+" | "-") term)*
    term    := factor ("*" factor)*
    factor  := rational | "(" poly-in-z ")@" k | "x" ["^" n] | "d" ["^" n]

Factors are multiplied left to right in A1, so non-normal input such as
``d*x`` is accepted and normalized. Output lists terms in ascending
lexicographic (i, j) order as ``c*x^i*d^j``.
"""
import json
import re
from typing import Any, Dict, List

from sympy.polys.domains import QQ

from core.errors import ParseError
from exactnum.cyclotomic import CycElem, parse_cyc
from exactnum.scalars import Rat, format_rat, parse_rat, is_formal
from exactnum.series import split_terms
from weyl.weyl_op import WeylOp

_POWER_RE = re.compile(r"^(?P<v>x|d|∂)(?:\^(?P<n>\d+))?$")


def _split_factors(term: str) -> List[str]:
    out, depth, start = [], 0, 0
    for i, ch in enumerate(term):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0:
            out.append(term[start:i].strip())
            start = i + 1
    out.append(term[start:].strip())
    return out


def _parse_factor(text: str, source: str) -> WeylOp:
    m = _POWER_RE.match(text)
    if m:
        n = int(m.group("n")) if m.group("n") else 1
        return WeylOp.monomial(n, 0) if m.group("v") == "x" else WeylOp.monomial(0, n)
    if text.startswith("("):
        return WeylOp.constant(parse_cyc(text))
    try:
        return WeylOp.constant(parse_rat(text))
    except ParseError:
        raise ParseError(f"bad factor {text!r}", source)


def parse_op(text: str) -> WeylOp:
    if not text.strip():
        raise ParseError("empty operator", text)
    if text.strip() == "0":
        return WeylOp.zero()
    out = WeylOp.zero()
    for sign, term in split_terms(text):
        value = WeylOp.one()
        for factor in _split_factors(term):
            if not factor:
                raise ParseError(f"empty factor in {term!r}", text)
            value = value * _parse_factor(factor, text)
        out = out + (value if sign > 0 else -value)
    return out


def format_coeff(c: Any):
    """(sign, magnitude text) with magnitude "1" for unit coefficients."""
    if isinstance(c, CycElem):
        if not c.is_rational():
            return 1, str(c)
        c = c.to_rat()
    if is_formal(c):
        if c.is_ground:
            c = c.LC
        else:
            return 1, f"({c})"
    c = c if isinstance(c, Rat) else QQ.convert(c)
    return (1 if c >= 0 else -1), format_rat(abs(c))


def format_monomial(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("x" if i == 1 else f"x^{i}")
    if j:
        parts.append("d" if j == 1 else f"d^{j}")
    return "*".join(parts)


def format_op(P: WeylOp) -> str:
    if P.is_zero():
        return "0"
    pieces: List[str] = []
    for (i, j), c in P.items():
        sign, mag = format_coeff(c)
        mono = format_monomial(i, j)
        if not mono:
            body = mag
        elif mag == "1":
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not pieces:
            pieces.append(body if sign > 0 else f"-{body}")
        else:
            pieces.append(("+ " if sign > 0 else "- ") + body)
    return " ".join(pieces)


def coeff_text(c: Any) -> str:
    sign, mag = format_coeff(c)
    return mag if sign > 0 else f"-{mag}"


def parse_coeff(text: str):
    text = text.strip()
    if text.startswith("-") and text[1:].strip().startswith("("):
        return -parse_cyc(text[1:])
    if text.startswith("("):
        return parse_cyc(text)
    return parse_rat(text)


def op_to_json(P: WeylOp) -> List[Dict[str, Any]]:
    return [{"i": i, "j": j, "coeff": coeff_text(c)} for (i, j), c in P.items()]


def op_from_json(data: Any) -> WeylOp:
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, list):
        raise ParseError("operator JSON must be a list of terms", str(data))
    terms: Dict[Any, Any] = {}
    for entry in data:
        try:
            key = (int(entry["i"]), int(entry["j"]))
            c = parse_coeff(str(entry["coeff"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad operator term {entry!r}: {exc}", str(data))
        terms[key] = terms[key] + c if key in terms else c
    try:
        return WeylOp(terms)
    except ValueError as exc:
        raise ParseError(f"bad operator JSON: {exc}", str(data))


# tame generators -------------------------------------------------------

_GEN_RE = re.compile(r"^\s*(?P<name>Phi|PhiP|Lin)\s*\((?P<args>[^()]*)\)\s*$")


def format_generator(gen) -> str:
    if gen.kind == "linear":
        return "Lin({})".format(",".join(coeff_text(v) for v in gen.abcd))
    name = "Phi" if gen.kind == "phi" else "PhiP"
    return f"{name}({gen.n},{coeff_text(gen.lam)})"


def parse_generator(text: str):
    from weyl.endo import phi, phi_prime, linear
    m = _GEN_RE.match(text)
    if m is None:
        raise ParseError(f"not a tame generator: {text!r}", text)
    args = [a.strip() for a in m.group("args").split(",")]
    if m.group("name") == "Lin":
        if len(args) != 4:
            raise ParseError("Lin takes four coefficients", text)
        return linear(*[parse_rat(a) for a in args])
    if len(args) != 2:
        raise ParseError(f"{m.group('name')} takes a degree and a coefficient", text)
    try:
        n = int(args[0])
    except ValueError:
        raise ParseError(f"bad generator degree {args[0]!r}", text)
    lam = parse_rat(args[1])
    return phi(n, lam) if m.group("name") == "Phi" else phi_prime(n, lam)


def parse_word(text: str) -> list:
    """Generators separated by semicolons, leftmost applied last."""
    return [parse_generator(part) for part in text.split(";") if part.strip()]


def format_word(word) -> str:
    return "; ".join(format_generator(g) for g in word)

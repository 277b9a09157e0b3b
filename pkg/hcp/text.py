# hcp/text.py
"""
Text and JSON forms of Hcp / Hcpc values.

    expr   := term (("+" | "-") term)* "@" k
    term   := [coeff "*"] atom
    atom   := ["x^l*"] ["A_i*"] ["d^l*"] ["D^r"]  |  "B_j" ["*D^r"]
    coeff  := rational | "(" poly-in-z ")"        z = xi_k

x and d carry the same exponent inside an atom; omitted factors have
exponent (or index) 0.
"""
import json
import re
from typing import Any, Dict, List, Tuple

from core.errors import ParseError
from exactnum.cyclotomic import CycElem, cyclotomic_field, parse_poly_in_z
from exactnum.scalars import format_rat, parse_rat
from exactnum.series import split_terms
from hcp.atoms import Hcp, Hcpc

_FACTOR_RE = re.compile(r"^(?P<name>x|d|A_|B_|D)(?:\^?(?P<e>-?\d+))?$")


def _coeff_text(c: CycElem) -> Tuple[int, str]:
    if c.is_rational():
        v = c.to_rat()
        return (1 if v > 0 else -1), format_rat(abs(v))
    return 1, f"({c.inner_text()})"


def _atom_text(l: int, i: int, r: int, j: int = 0) -> str:
    parts = []
    if j:
        parts.append(f"B_{j}")
    else:
        if l:
            parts.append("x" if l == 1 else f"x^{l}")
        if i:
            parts.append(f"A_{i}")
        if l:
            parts.append("d" if l == 1 else f"d^{l}")
    if r:
        parts.append(f"D^{r}")
    return "*".join(parts)


def _terms(H: Hcp) -> List[Tuple[CycElem, str]]:
    out = [(c, _atom_text(l, i, H.r)) for (l, i), c in sorted(H.xa.items())]
    out.extend((c, _atom_text(0, 0, H.r, j)) for j, c in sorted(H.b.items()))
    return out


def _join(terms: List[Tuple[CycElem, str]]) -> str:
    pieces: List[str] = []
    for c, atom in terms:
        sign, mag = _coeff_text(c)
        if not atom:
            body = mag
        elif mag == "1":
            body = atom
        else:
            body = f"{mag}*{atom}"
        if not pieces:
            pieces.append(body if sign > 0 else f"-{body}")
        else:
            pieces.append(("+ " if sign > 0 else "- ") + body)
    return " ".join(pieces) if pieces else "0"


def format_hcp(H: Hcp) -> str:
    return f"{_join(_terms(H))} @{H.k}"


def format_hcpc(H: Hcpc) -> str:
    terms: List[Tuple[CycElem, str]] = []
    for C in H:
        terms.extend(_terms(C))
    return f"{_join(terms)} @{H.k}"


def parse_hcpc(text: str) -> Hcpc:
    body, sep, modulus = text.rpartition("@")
    if not sep:
        raise ParseError("Hcp text needs an @k modulus suffix", text)
    try:
        k = int(modulus.strip())
    except ValueError:
        raise ParseError(f"bad modulus {modulus!r}", text)
    field = cyclotomic_field(k)
    if body.strip() == "0":
        return Hcpc.zero(k)
    parts: List[Hcp] = []
    for sign, term in split_terms(body):
        coeff = field.one * sign
        xdeg = ddeg = i = j = r = 0
        for factor in _split(term):
            if factor.startswith("("):
                if not factor.endswith(")"):
                    raise ParseError(f"bad coefficient {factor!r}", text)
                coeff = coeff * parse_poly_in_z(factor[1:-1], field)
                continue
            m = _FACTOR_RE.match(factor)
            if m is None:
                try:
                    coeff = coeff * parse_rat(factor)
                except ParseError:
                    raise ParseError(f"bad factor {factor!r}", text)
                continue
            name = m.group("name")
            e = int(m.group("e")) if m.group("e") is not None else 1
            if name == "x":
                xdeg = e
            elif name == "d":
                ddeg = e
            elif name == "A_":
                i = e
            elif name == "B_":
                j = e
            else:
                r = e
        if xdeg != ddeg:
            raise ParseError(f"atom {term!r} has unequal x and d degrees", text)
        if j:
            if xdeg or i:
                raise ParseError(f"B atom {term!r} carries x, d or A factors", text)
            parts.append(Hcp(k, r, b={j: coeff}))
        else:
            parts.append(Hcp(k, r, {(xdeg, i): coeff}))
    return Hcpc(k, parts)


def _split(term: str) -> List[str]:
    out, depth, start = [], 0, 0
    for idx, ch in enumerate(term):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0:
            out.append(term[start:idx].strip())
            start = idx + 1
    out.append(term[start:].strip())
    return [f for f in out if f]


def hcp_to_json(H: Hcp) -> Dict[str, Any]:
    return {
        "order": H.r,
        "xa": [{"l": l, "i": i, "coeff": c.inner_text()} for (l, i), c in sorted(H.xa.items())],
        "b": [{"j": j, "coeff": c.inner_text()} for j, c in sorted(H.b.items())],
    }


def hcp_from_json(data: Dict[str, Any], k: int) -> Hcp:
    field = cyclotomic_field(k)
    try:
        r = int(data["order"])
        xa = {(int(t["l"]), int(t["i"])): parse_poly_in_z(str(t["coeff"]), field) for t in data.get("xa", [])}
        b = {int(t["j"]): parse_poly_in_z(str(t["coeff"]), field) for t in data.get("b", [])}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad Hcp JSON: {exc}", json.dumps(data))
    return Hcp(k, r, xa, b)


def hcpc_to_json(H: Hcpc) -> Dict[str, Any]:
    return {"modulus": H.k, "components": [hcp_to_json(C) for C in H]}


def hcpc_from_json(data: Any) -> Hcpc:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        k = int(data["modulus"])
        comps = data["components"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad Hcpc JSON: {exc}", json.dumps(data))
    return Hcpc(k, [hcp_from_json(c, k) for c in comps])

# normalform/conditions.py
"""Condition A_q(k) and regularity of graded operators."""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Union

from sympy import Poly, Rational, Symbol, factor_list

from hcp.atoms import Hcp, eval_symbol, symbol_terms
from hcp.centralizer import is_totally_free_B
from normalform.graded import GradedOp
from weyl.d1_op import D1Op

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AqWitness:
    clause: int
    order: int
    detail: str


@dataclass(frozen=True)
class AqResult:
    ok: bool
    witness: Optional[AqWitness] = None

    def __bool__(self):
        return self.ok


def condition_Aq(P: GradedOp, q: int, kparam: int) -> AqResult:
    """
    The four clauses on the stored components:
      1. every component is an Hcp of Hcpc(q)
      2. every component is totally free of B_j
      3. Sdeg_A(P_(ord - i)) < i + kparam for i > 0
      4. the symbol carries no A_i, i != 0, and Sdeg_A(symbol) = kparam
    """
    if P.is_zero():
        return AqResult(False, AqWitness(4, P.top, "operator vanishes on its known window"))
    if P.k != q:
        if q % P.k:
            return AqResult(False, AqWitness(1, P.top, f"modulus {P.k} does not divide {q}"))
        P = P.rescale(q)
    top = P.top
    for r, H in sorted(P.comps.items(), reverse=True):
        if not is_totally_free_B(H):
            return AqResult(False, AqWitness(2, r, "component is not totally free of B_j"))
        i = top - r
        if i > 0 and not H.sdeg_a() < i + kparam:
            return AqResult(False, AqWitness(3, r, f"Sdeg_A = {H.sdeg_a()} >= {i + kparam}"))
    sigma = P.symbol()
    if any(i for _, i in sigma.xa):
        return AqResult(False, AqWitness(4, top, "symbol contains A_i with i != 0"))
    if sigma.sdeg_a() != kparam:
        return AqResult(False, AqWitness(4, top, f"Sdeg_A(symbol) = {sigma.sdeg_a()} != {kparam}"))
    return AqResult(True)


class Regularity(Enum):
    REGULAR = "regular"
    IRREGULAR = "irregular"
    UNDETERMINED = "undetermined"


_N = Symbol("n")


def _class_coordinates(H: Hcp, s: int) -> List[Poly]:
    """
    On n = s mod k the symbol of H (B part aside) is a polynomial in n with
    coefficients in Q(xi); returns its rational coordinate polynomials.
    """
    field = H.field
    coords = [Poly(0, _N, domain="QQ") for _ in range(field.degree)]
    for (i, l), c in symbol_terms(H).items():
        value = c * field.xi_power(i * s)
        ff = Poly(1, _N, domain="QQ")
        for t in range(l):
            ff = ff * Poly(_N - t, _N, domain="QQ")
        for idx, a in enumerate(value.coeffs):
            if a:
                coords[idx] = coords[idx] + ff * Rational(int(a.numerator), int(a.denominator))
    return coords


def irregular_point(H: Hcp) -> Optional[int]:
    """
    Least-effort witness n with d^n o H = 0 in F = K[d], or None when the
    right action of H on F is injective. The right action sends d^n to
    E(n) d^(n + r), where E is the symbol of H; for r < 0 the powers
    d^n, n < -r, are killed outright.
    """
    if H.is_zero():
        return 0
    if H.r < 0:
        return 0
    k = H.k
    candidates = set(j - 1 for j in H.b)
    for s in range(k):
        coords = [c for c in _class_coordinates(H, s) if not c.is_zero]
        if not coords:
            # identically zero on the class; B terms rescue finitely many points
            n = s
            while eval_symbol(H, n):
                n += k
            return n
        g = coords[0]
        for c in coords[1:]:
            g = g.gcd(c)
        if g.degree() < 1:
            continue
        _, factors = factor_list(g.as_expr(), _N)
        for fac, _ in factors:
            fp = Poly(fac, _N)
            if fp.degree() != 1:
                continue
            a, b = fp.all_coeffs()
            root = -b / a
            if root.is_integer and root >= 0 and int(root) % k == s:
                candidates.add(int(root))
    for n in sorted(candidates):
        if n >= 0 and not eval_symbol(H, n):
            return n
    return None


def is_regular(P: Union[GradedOp, D1Op]) -> Regularity:
    """
    Injectivity of the right action of the symbol on F = K[d]. A D1
    operator with invertible head coefficient is regular outright;
    otherwise the symbol is read from the graded embedding, and an
    operator whose symbol lies below the known window is undetermined.
    """
    if isinstance(P, D1Op):
        if P.is_zero():
            return Regularity.UNDETERMINED
        if P.ht[0]:
            return Regularity.REGULAR
        P = GradedOp.from_d1(P, 1)
    if P.is_zero():
        return Regularity.UNDETERMINED
    n = irregular_point(P.symbol())
    if n is None:
        return Regularity.REGULAR
    logger.debug("symbol of order %d kills d^%d", P.top, n)
    return Regularity.IRREGULAR

# pipeline/ode.py
"""
The polynomial differential equation of the induction step

    c g^A = H' g - ((z + 1) / d) H g',     z = (A - 1) d

solved for a polynomial H by exact linear algebra on its coefficients.
A solution has degree l (A - 1) + 1 or l (z + 1) / d, l = deg g, since
otherwise the leading terms of H' g and H g' cannot cancel.
"""
import logging
from dataclasses import dataclass
from math import gcd
from typing import Any, List, Optional, Sequence, Union

from sympy import Poly, Rational, Symbol, diff, expand, linsolve, symbols
from sympy.polys.domains import QQ

from core.errors import ObstructionError, PreconditionError
from exactnum.cyclotomic import cyclotomic_field
from exactnum.linalg import solve_cyc
from exactnum.scalars import Rat, rat

logger = logging.getLogger(__name__)

X = Symbol("x")

PolyLike = Union[Poly, Sequence[Any]]


def as_poly(g: PolyLike) -> Poly:
    """A Poly over QQ in x; sequences are read lowest degree first."""
    if isinstance(g, Poly):
        return Poly(g.as_expr(), X, domain="QQ")
    coeffs = [sym(c) for c in g]
    return Poly(list(reversed(coeffs)) or [0], X, domain="QQ")


def sym(c: Any) -> Rational:
    c = rat(c)
    return Rational(int(c.numerator), int(c.denominator))


def distinct_roots(g: Poly) -> int:
    """Number of distinct roots over the algebraic closure."""
    return g.degree() - g.gcd(g.diff(X)).degree()


@dataclass(frozen=True)
class OdeSolution:
    H: Optional[Poly]
    degree_bound: int
    roots: int
    obstruction: Optional[List[Any]] = None

    @property
    def solvable(self) -> bool:
        return self.H is not None

    @property
    def degree(self) -> Optional[int]:
        if self.H is None:
            return None
        return self.H.degree()


def _check(g: Poly, A: int, d: int, z: int, c: Any):
    if g.is_zero:
        raise PreconditionError("g must be nonzero")
    if A < 1 or d < 1:
        raise PreconditionError("A and d must be positive integers")
    if z != (A - 1) * d:
        raise PreconditionError(f"parameters must satisfy z = (A - 1) d, got z={z}, A={A}, d={d}")
    if not c:
        raise PreconditionError("c must be nonzero")


def degree_bound(l: int, A: int, d: int, z: int) -> int:
    return max(l * (A - 1) + 1, (z + 1) * l // d)


def ode_operator(H: Poly, g: Poly, d: int, z: int) -> Poly:
    """H' g - ((z + 1) / d) H g'."""
    return H.diff(X) * g - H * g.diff(X) * Rational(z + 1, d)


def poly_ode_solve(g: PolyLike, A: int, d: int, z: int, c: Any) -> OdeSolution:
    """
    :returns: an OdeSolution; ``H`` is None when the linear system on the
        coefficients of H is inconsistent, with the reduced row kept in
        ``obstruction``
    :raises PreconditionError: when z != (A - 1) d, g = 0 or c = 0
    """
    g = as_poly(g)
    c = rat(c)
    _check(g, A, d, z, c)
    l = g.degree()
    D = degree_bound(l, A, d, z)
    rhs_poly = g ** A * sym(c)
    height = max(D + l, rhs_poly.degree() + 1)

    def coeffs_of(p: Poly) -> List[Rat]:
        out = [QQ(0)] * height
        for (e,), a in p.terms():
            out[e] = rat(a)
        return out

    columns = [coeffs_of(ode_operator(Poly(X ** i, X, domain="QQ"), g, d, z)) for i in range(D + 1)]
    rows = [[col[e] for col in columns] for e in range(height)]
    rhs = coeffs_of(rhs_poly)
    field = cyclotomic_field(1)
    roots = distinct_roots(g)
    try:
        sol = solve_cyc(rows, rhs, field)
    except ObstructionError as exc:
        logger.debug("no polynomial solution for deg g=%d, A=%d, d=%d", l, A, d)
        return OdeSolution(None, D, roots, exc.obstruction)
    values = [s.to_rat() for s in sol]
    H = Poly([sym(v) for v in reversed(values)], X, domain="QQ")
    logger.debug("solution of degree %d for deg g=%d, A=%d, d=%d", H.degree(), l, A, d)
    return OdeSolution(H, D, roots)


def dense_ode_oracle(g: PolyLike, A: int, d: int, z: int, c: Any) -> Optional[Poly]:
    """
    Independent solve: symbolic coefficients and sympy's linsolve; free
    parameters are set to zero. None when there is no solution.
    """
    g = as_poly(g)
    c = rat(c)
    _check(g, A, d, z, c)
    D = degree_bound(g.degree(), A, d, z)
    hs = symbols(f"h0:{D + 1}")
    H = sum(h * X ** i for i, h in enumerate(hs))
    gexpr = g.as_expr()
    residual = expand(diff(H, X) * gexpr - Rational(z + 1, d) * H * diff(gexpr, X) - sym(c) * gexpr ** A)
    equations = Poly(residual, X).coeffs()
    solutions = linsolve(equations, hs)
    if not solutions:
        return None
    (values,) = tuple(solutions)
    free = {h: 0 for h in hs}
    concrete = [v.subs(free) for v in values]
    return Poly(sum(v * X ** i for i, v in enumerate(concrete)), X, domain="QQ")


def one_root_solution(alpha: Any, l: int, A: int, d: int, c: Any) -> Poly:
    """
    For g = (1 + alpha x)^l with d not dividing l the unique solution is
    c' (1 + alpha x)^(l (A - 1) + 1), c' = c / (alpha (1 - l/d)).
    """
    alpha, c = rat(alpha), rat(c)
    if not alpha:
        raise PreconditionError("alpha must be nonzero")
    if l % d == 0:
        raise PreconditionError("one-root closed form needs d not dividing l")
    scale = c / (alpha * (1 - QQ(l, d)))
    base = as_poly([1, alpha])
    return base ** (l * (A - 1) + 1) * sym(scale)


@dataclass(frozen=True)
class PairShape:
    """Shape data p = dn, q = dm of a pair whose tops are (1 + alpha x)^(ln) y^(dn), (1 + alpha x)^(lm) y^(dm)."""
    d: int
    n: int
    m: int
    l: int
    alpha: Rat = QQ(1)

    def __post_init__(self):
        object.__setattr__(self, "alpha", rat(self.alpha))
        if min(self.d, self.n, self.m, self.l) < 1:
            raise PreconditionError("shape parameters must be positive")
        if gcd(self.n, self.m) != 1:
            raise PreconditionError(f"n={self.n} and m={self.m} must be coprime")
        if self.l >= self.d:
            raise PreconditionError(f"shape needs l < d, got l={self.l}, d={self.d}")
        if not self.alpha:
            raise PreconditionError("alpha must be nonzero")

    @property
    def p(self) -> int:
        return self.d * self.n

    @property
    def q(self) -> int:
        return self.d * self.m

    @property
    def d2(self) -> int:
        return self.d // gcd(self.l, self.d)

    @property
    def epsilon(self) -> Rat:
        return QQ(self.n, self.m)

    def g(self) -> Poly:
        return as_poly([1, self.alpha]) ** self.l


@dataclass(frozen=True)
class StepShape:
    z: int
    A: int
    predicted_degree: int
    epsilon1: Rat
    solution: OdeSolution

    @property
    def matches(self) -> bool:
        return self.solution.solvable and self.solution.degree == self.predicted_degree


def induction_step_shape(shape: PairShape) -> StepShape:
    """
    First induction step for g = (1 + alpha x)^l: the highest coefficient H
    of Q^n - P^m satisfies (1/d) g^A = H' g - ((z + 1)/d) H g' with
    z = q (n - 1) - p and A = (m - 1)(n - 1).
    """
    if shape.n < 2 or shape.m < 2:
        raise PreconditionError("the induction step needs n, m >= 2")
    z = shape.q * (shape.n - 1) - shape.p
    A = (shape.m - 1) * (shape.n - 1)
    predicted = A * shape.l - (shape.l - 1)
    eps1 = (1 - QQ(shape.l, shape.d)) / (shape.alpha * shape.d)
    solution = poly_ode_solve(shape.g(), A, shape.d, z, QQ(1, shape.d))
    logger.info("induction step for %s: z=%d, A=%d, deg H=%s (predicted %d)",
                shape, z, A, solution.degree, predicted)
    return StepShape(z, A, predicted, eps1, solution)

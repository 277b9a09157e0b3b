# newton/polygon.py
"""
Commutative polynomials K[x, y], (sigma, rho)-weights, top parts and
Newton polygons. A Weyl operator enters through its commutative symbol
x^i d^j -> x^i y^j.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

from sympy.polys.domains import QQ

from core.errors import PreconditionError
from exactnum.scalars import Rat, rat
from weyl.weyl_op import WeylOp, scalar

logger = logging.getLogger(__name__)

Point = Tuple[int, int]


@dataclass(frozen=True)
class Weight:
    sigma: Rat
    rho: Rat

    def __post_init__(self):
        object.__setattr__(self, "sigma", rat(self.sigma))
        object.__setattr__(self, "rho", rat(self.rho))

    def value(self, point: Point) -> Rat:
        return self.sigma * point[0] + self.rho * point[1]

    def __str__(self):
        return f"({self.sigma},{self.rho})"


ORD = Weight(0, 1)          # v_{0,1} = ord
ORD_X = Weight(1, 0)        # v_{1,0} = ord_x
BORD = Weight(-1, 1)        # the order function, v_{1,-1} in (d, x) reading


class BivarPoly:
    """Sparse commutative polynomial in x, y."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Dict[Point, Any] = None):
        clean = {}
        for key, c in (terms or {}).items():
            c = scalar(c)
            if c:
                clean[key] = c
        self._terms = clean

    @classmethod
    def from_weyl(cls, P: WeylOp) -> "BivarPoly":
        return cls(P.terms)

    @classmethod
    def monomial(cls, i: int, j: int, c: Any = 1) -> "BivarPoly":
        return cls({(i, j): c})

    @classmethod
    def y(cls) -> "BivarPoly":
        return cls({(0, 1): QQ(1)})

    @classmethod
    def x(cls) -> "BivarPoly":
        return cls({(1, 0): QQ(1)})

    @property
    def terms(self) -> Dict[Point, Any]:
        return dict(self._terms)

    def items(self):
        for key in sorted(self._terms):
            yield key, self._terms[key]

    def support(self) -> List[Point]:
        return sorted(self._terms)

    def coeff(self, i: int, j: int):
        return self._terms.get((i, j), QQ(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __add__(self, other):
        if not isinstance(other, BivarPoly):
            other = BivarPoly({(0, 0): other})
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return BivarPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, BivarPoly):
            other = BivarPoly({(0, 0): other})
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, BivarPoly):
            c = scalar(other)
            return BivarPoly({k: v * c for k, v in self._terms.items()})
        out: Dict[Point, Any] = {}
        for (a, b), p in self._terms.items():
            for (c, d), q in other._terms.items():
                key = (a + c, b + d)
                out[key] = out[key] + p * q if key in out else p * q
        return BivarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = BivarPoly({(0, 0): QQ(1)}), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, BivarPoly):
            if isinstance(other, WeylOp):
                return NotImplemented
            other = BivarPoly({(0, 0): other})
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset((k, str(c)) for k, c in self._terms.items()))

    def diff_x(self) -> "BivarPoly":
        return BivarPoly({(i - 1, j): c * i for (i, j), c in self._terms.items() if i})

    def diff_y(self) -> "BivarPoly":
        return BivarPoly({(i, j - 1): c * j for (i, j), c in self._terms.items() if j})

    def evaluate(self, X: WeylOp, Y: WeylOp) -> WeylOp:
        """F(X, Y) with the x-power written to the left of the y-power."""
        out = WeylOp.zero()
        xs = {0: WeylOp.one()}
        ys = {0: WeylOp.one()}
        for (i, j), c in self.items():
            for cache, base, n in ((xs, X, i), (ys, Y, j)):
                top = max(cache)
                while top < n:
                    cache[top + 1] = cache[top] * base
                    top += 1
            out = out + xs[i] * ys[j] * c
        return out

    def __str__(self):
        if not self._terms:
            return "0"
        from weyl.text_format import format_coeff
        pieces = []
        for (i, j), c in self.items():
            sign, mag = format_coeff(c)
            mono = "*".join(p for p in (
                "" if not i else ("x" if i == 1 else f"x^{i}"),
                "" if not j else ("y" if j == 1 else f"y^{j}")) if p)
            body = mag if not mono else (mono if mag == "1" else f"{mag}*{mono}")
            if not pieces:
                pieces.append(body if sign > 0 else f"-{body}")
            else:
                pieces.append(("+ " if sign > 0 else "- ") + body)
        return " ".join(pieces)

    def __repr__(self):
        return f"BivarPoly({self})"


Polyish = Union[BivarPoly, WeylOp]


def _as_bivar(f: Polyish) -> BivarPoly:
    return BivarPoly.from_weyl(f) if isinstance(f, WeylOp) else f


@dataclass(frozen=True)
class WeightDegree:
    value: Rat
    top: Tuple[Point, ...]


def weight_degree(f: Polyish, w: Weight) -> WeightDegree:
    """v_w(f) = max of sigma*i + rho*j over the support, with the attaining points."""
    support = f.support()
    if not support:
        raise PreconditionError("weight degree of zero is undefined")
    best = max(w.value(p) for p in support)
    return WeightDegree(best, tuple(p for p in support if w.value(p) == best))


def top_part(f: Polyish, w: Weight) -> BivarPoly:
    poly = _as_bivar(f)
    top = weight_degree(poly, w).top
    return BivarPoly({p: poly.coeff(*p) for p in top})


def poisson(f: BivarPoly, g: BivarPoly) -> BivarPoly:
    """{f, g} = f_x g_y - f_y g_x."""
    return f.diff_x() * g.diff_y() - f.diff_y() * g.diff_x()


def monomial_check(f: Polyish) -> bool:
    return len(f.support()) == 1


def hull(points: Iterable[Point]) -> List[Point]:
    """Convex hull vertices by the monotone chain, counter-clockwise from the lowest-left point."""
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: List[Point] = []
    for p in pts:
        while len(lower) > 1 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Point] = []
    for p in reversed(pts):
        while len(upper) > 1 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


@dataclass
class PolygonData:
    points: List[Point]
    hull: List[Point]
    tops: Dict[str, WeightDegree] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        from exactnum.scalars import format_rat
        return {
            "points": [list(p) for p in self.points],
            "hull": [list(p) for p in self.hull],
            "tops": {
                key: {"value": format_rat(wd.value), "top": [list(p) for p in wd.top]}
                for key, wd in self.tops.items()
            },
        }


def polygon_data(f: Polyish, weights: Sequence[Weight] = (ORD, ORD_X)) -> PolygonData:
    support = f.support()
    if not support:
        raise PreconditionError("Newton polygon of zero is undefined")
    return PolygonData(
        points=list(support),
        hull=hull(support),
        tops={str(w): weight_degree(f, w) for w in weights},
    )

# weyl/endo.py
"""
Endomorphisms of A1 given by the images of x and d, and the tame generators

    Phi(n, lam):        x -> x + lam ∂^n,   ∂ -> ∂
    PhiP(n, lam):       ∂ -> ∂ + lam x^n,   x -> x
    Lin(a, b, c, d):    ∂ -> a ∂ + b x,     x -> c ∂ + d x,   ad - bc = 1

n = 0 gives the translations; Lin(0, 1, -1, 0) is the Fourier swap.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Sequence, Tuple

from sympy.polys.domains import QQ

from core.errors import PreconditionError
from weyl.weyl_op import WeylOp, commutator, scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Endo:
    img_x: WeylOp
    img_d: WeylOp
    verified: bool = False

    @classmethod
    def identity(cls) -> "Endo":
        return cls(WeylOp.x(), WeylOp.d(), True)

    @classmethod
    def checked(cls, img_x: WeylOp, img_d: WeylOp) -> "Endo":
        """Build and verify [img_d, img_x] = 1; raises PreconditionError otherwise."""
        if commutator(img_d, img_x) != WeylOp.one():
            raise PreconditionError("images do not satisfy [phi(d), phi(x)] = 1")
        return cls(img_x, img_d, True)

    def verify(self) -> "Endo":
        return self if self.verified else Endo.checked(self.img_x, self.img_d)

    def is_identity(self) -> bool:
        return self.img_x == WeylOp.x() and self.img_d == WeylOp.d()


@dataclass(frozen=True)
class TameGen:
    kind: str                       # "phi", "phi_prime" or "linear"
    n: int = 0
    lam: Any = None
    abcd: Tuple[Any, Any, Any, Any] = field(default=(1, 0, 0, 1))

    def __str__(self):
        from weyl.text_format import format_generator
        return format_generator(self)


def phi(n: int, lam: Any) -> TameGen:
    return TameGen("phi", n, scalar(lam))


def phi_prime(n: int, lam: Any) -> TameGen:
    return TameGen("phi_prime", n, scalar(lam))


def linear(a: Any, b: Any, c: Any, d: Any) -> TameGen:
    return TameGen("linear", abcd=tuple(scalar(v) for v in (a, b, c, d)))


FOURIER = TameGen("linear", abcd=(QQ(0), QQ(1), QQ(-1), QQ(0)))


def tame(gen: TameGen) -> Endo:
    """The verified endomorphism of a tame generator."""
    x, d = WeylOp.x(), WeylOp.d()
    if gen.kind == "phi":
        if gen.n < 0:
            raise PreconditionError("generator degree must be non-negative")
        return Endo(x + WeylOp.monomial(0, gen.n, gen.lam), d, True)
    if gen.kind == "phi_prime":
        if gen.n < 0:
            raise PreconditionError("generator degree must be non-negative")
        return Endo(x, d + WeylOp.monomial(gen.n, 0, gen.lam), True)
    if gen.kind == "linear":
        a, b, c, dd = gen.abcd
        if a * dd - b * c != 1:
            raise PreconditionError(f"linear generator needs ad - bc = 1, got {a * dd - b * c}")
        return Endo(d * c + x * dd, d * a + x * b, True)
    raise PreconditionError(f"unknown generator kind {gen.kind!r}")


def inverse_generator(gen: TameGen) -> TameGen:
    if gen.kind in ("phi", "phi_prime"):
        return TameGen(gen.kind, gen.n, -gen.lam)
    a, b, c, d = gen.abcd
    return TameGen("linear", abcd=(d, -b, -c, a))


def is_identity_generator(gen: TameGen) -> bool:
    if gen.kind == "linear":
        return tuple(gen.abcd) == (1, 0, 0, 1)
    return not gen.lam


def apply_endo(E: Endo, P: WeylOp) -> WeylOp:
    """Substitute the images into the normally ordered form of P."""
    xs: Dict[int, WeylOp] = {0: WeylOp.one()}
    ds: Dict[int, WeylOp] = {0: WeylOp.one()}

    def power(cache: Dict[int, WeylOp], base: WeylOp, n: int) -> WeylOp:
        top = max(k for k in cache if k <= n)
        while top < n:
            cache[top + 1] = cache[top] * base
            top += 1
        return cache[n]

    out = WeylOp.zero()
    for (i, j), c in P.items():
        term = power(xs, E.img_x, i) * power(ds, E.img_d, j)
        out = out + term * c
    return out


def compose_endo(E1: Endo, E2: Endo) -> Endo:
    """E1 after E2, i.e. (E1 o E2)(x) = E1(E2(x))."""
    return Endo(apply_endo(E1, E2.img_x), apply_endo(E1, E2.img_d),
                E1.verified and E2.verified)


def compose_word(word: Sequence[TameGen]) -> Endo:
    """G1 o G2 o ... o Gn for the word [G1, ..., Gn]; the empty word is the identity."""
    result = Endo.identity()
    for gen in word:
        result = compose_endo(result, tame(gen))
    return result


def shift_x(P: WeylOp, c: Any) -> WeylOp:
    """x -> x + c, d -> d."""
    return apply_endo(tame(phi(0, c)), P)


def head_term_at_zero(P: WeylOp):
    """HT(P)(0): the constant coefficient of the top d-power."""
    top = P.d_degree()
    return P.coeff(0, top)


def generic_shift(P: WeylOp, max_steps: int = 64) -> Tuple[Any, WeylOp]:
    """
    First c = 0, 1, 2, ... with HT(P(x + c))(0) != 0.

    :returns: (c, shifted operator)
    """
    if P.is_zero():
        raise PreconditionError("cannot shift the zero operator")
    for step in range(max_steps):
        shifted = shift_x(P, step) if step else P
        if head_term_at_zero(shifted):
            logger.debug("generic shift settled at c=%d", step)
            return QQ(step), shifted
    raise PreconditionError(f"no admissible shift among c < {max_steps}")

# pipeline/decompose.py
"""
Writing an automorphism phi, given by P = phi(x) and Q = phi(d), as a
word in tame generators.

Composing on the right changes one image at a time:

    phi o Phi(k, -c):   P -> P - c Q^k
    phi o PhiP(k, -c):  Q -> Q - c P^k

so whenever the (1,1)-top of the image of larger degree is c times a
power of the other top, that move strictly lowers deg P + deg Q. What is
left at total degree 2 is affine and splits into a linear generator and
two translations.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

from config import Config
from core.event_bus import emit_to
from events.events import ReductionMoveApplied
from newton.dixmier import proportionality_constant
from newton.polygon import Weight, top_part, weight_degree
from weyl.endo import (TameGen, compose_word, inverse_generator, is_identity_generator, linear, phi,
                       phi_prime)
from weyl.weyl_op import WeylOp, commutator

logger = logging.getLogger(__name__)

TOTAL = Weight(1, 1)


def total_degree(P: WeylOp) -> int:
    return int(weight_degree(P, TOTAL).value) if P else -1


@dataclass(frozen=True)
class FailureCertificate:
    reason: str
    P: WeylOp
    Q: WeylOp
    step: int


@dataclass
class Decomposition:
    word: List[TameGen] = field(default_factory=list)
    moves: List[TameGen] = field(default_factory=list)      # right factors removed, in order
    certificate: Optional[FailureCertificate] = None

    @property
    def ok(self) -> bool:
        return self.certificate is None

    def word_text(self) -> str:
        return " o ".join(str(g) for g in self.word) if self.word else "id"


def _reduction_move(big: WeylOp, small: WeylOp) -> Optional[tuple]:
    """(k, c) with f_{1,1}(big) = c f_{1,1}(small)^k, or None."""
    db, ds = total_degree(big), total_degree(small)
    if ds < 1 or db % ds:
        return None
    k = db // ds
    c = proportionality_constant(top_part(big, TOTAL), top_part(small, TOTAL) ** k)
    if c is None:
        return None
    return k, c


def _affine_word(P: WeylOp, Q: WeylOp) -> List[TameGen]:
    """P = a x + b d + e, Q = c x + f d + g  ->  [Lin, Phi(0, e), PhiP(0, g)]."""
    lin = linear(Q.coeff(0, 1), Q.coeff(1, 0), P.coeff(0, 1), P.coeff(1, 0))
    word = [lin, phi(0, P.coeff(0, 0)), phi_prime(0, Q.coeff(0, 0))]
    return [g for g in word if not is_identity_generator(g)]


def decompose_automorphism(P: WeylOp, Q: WeylOp, max_steps: Optional[int] = None, bus=None) -> Decomposition:
    """
    :returns: a Decomposition whose word composes to phi, or one carrying a
        FailureCertificate with the pair it got stuck on
    """
    if max_steps is None:
        max_steps = Config.get("max_steps", 64)
    out = Decomposition()
    if commutator(Q, P) != WeylOp.one():
        out.certificate = FailureCertificate("not an endomorphism: [Q, P] != 1", P, Q, 0)
        return out
    cur_p, cur_q = P, Q
    for step in range(max_steps):
        dp, dq = total_degree(cur_p), total_degree(cur_q)
        if dp <= 1 and dq <= 1:
            break
        if dp >= dq:
            move = _reduction_move(cur_p, cur_q)
            if move is None:
                out.certificate = FailureCertificate("no degree-lowering move for P", cur_p, cur_q, step)
                return out
            k, c = move
            gen = phi(k, -c)
            cur_p = cur_p - cur_q ** k * c
        else:
            move = _reduction_move(cur_q, cur_p)
            if move is None:
                out.certificate = FailureCertificate("no degree-lowering move for Q", cur_p, cur_q, step)
                return out
            k, c = move
            gen = phi_prime(k, -c)
            cur_q = cur_q - cur_p ** k * c
        out.moves.append(gen)
        degree = total_degree(cur_p) + total_degree(cur_q)
        emit_to(bus, ReductionMoveApplied(generator=str(gen), degree=degree, params={"k": k}))
        logger.debug("step %d: removed %s, total degree now %d", step, gen, degree)
    else:
        if total_degree(cur_p) > 1 or total_degree(cur_q) > 1:
            out.certificate = FailureCertificate(f"no affine pair after {max_steps} moves", cur_p, cur_q, max_steps)
            return out
    out.word = _affine_word(cur_p, cur_q) + [inverse_generator(g) for g in reversed(out.moves)]
    logger.info("decomposed into %d generators after %d moves", len(out.word), len(out.moves))
    return out


def recompose(decomposition: Decomposition):
    """The endomorphism of the word; equals phi for a successful decomposition."""
    return compose_word(decomposition.word)

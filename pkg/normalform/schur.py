# normalform/schur.py
"""
Schur operators and normal forms.

For a normalized P of order p the Schur operator S = 1 + S_-2 + S_-3 + ...
satisfies S P = d^p S. Comparing components of order p - t gives

    [d^p, S_-t] = sum_{s=0}^{t-2} S_-s P_(p-t+s)

and each S_-t is solved in the atom space x^l A_i d^l D^-t, l < t, i < p.
The normal form of Q is S Q S^-1.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from sympy.polys.domains import QQ

from config import Config
from core.errors import FieldMismatchError, ObstructionError, PrecisionError, PreconditionError
from core.event_bus import emit_to
from events.events import SchurComponentSolved
from exactnum.cyclotomic import cyclotomic_field
from exactnum.linalg import solve_cyc
from hcp.atoms import NEG_INF, Hcp, d_power, hcp_atom_mul, rescale
from hcp.centralizer import is_central
from normalform.graded import GradedOp, graded_mul, graded_ops, invert_unit
from normalform.normalize import VariableChange, normalize
from weyl.d1_op import D1Op, from_weyl
from weyl.endo import generic_shift, shift_x
from weyl.weyl_op import WeylOp

logger = logging.getLogger(__name__)


def bracket_solve(p: int, R: Hcp, t: Optional[int] = None) -> Hcp:
    """
    Y of order -t with [d^p, Y] = R. Free directions (the centralizer of
    d^p) are set to zero; the l = 0 unknowns come last so they are the
    ones left free.

    :raises ObstructionError: when R is not in the image
    """
    k = p
    if R.k != k:
        if k % R.k:
            raise FieldMismatchError(f"modulus {R.k} does not divide {k}")
        R = rescale(R, k)
    if t is None:
        t = p - R.r
    if t < 1:
        raise PreconditionError("bracket_solve needs t >= 1")
    if R.is_zero():
        return Hcp.zero(k, -t)
    if R.r != p - t:
        raise PreconditionError(f"right-hand side has order {R.r}, expected {p - t}")
    fld = cyclotomic_field(k)
    unknowns = [(l, i) for l in range(1, t) for i in range(k)] + [(0, i) for i in range(k)]
    dp = d_power(p, k)
    images = []
    for key in unknowns:
        Y = Hcp(k, -t, {key: 1})
        images.append(hcp_atom_mul(dp, Y) - hcp_atom_mul(Y, dp))

    rows_keys = set()
    for img in images + [R]:
        rows_keys.update(("a",) + key for key in img.xa)
        rows_keys.update(("b", j, 0) for j in img.b)
    order = sorted(rows_keys)

    def entry(H: Hcp, key):
        if key[0] == "a":
            return H.xa.get(key[1:], fld.zero)
        return H.b.get(key[1], fld.zero)

    rows = [[entry(img, key) for img in images] for key in order]
    rhs = [entry(R, key) for key in order]
    try:
        sol = solve_cyc(rows, rhs, fld)
    except ObstructionError as exc:
        raise ObstructionError(f"[d^{p}, Y] = R has no solution at order {-t}", exc.obstruction)
    return Hcp(k, -t, dict(zip(unknowns, sol)))


@dataclass
class SchurData:
    p: int
    S: GradedOp
    S_inv: GradedOp
    depth: int
    change: Optional[VariableChange] = None


def schur(Pnorm: D1Op, depth: Optional[int] = None, bus=None) -> SchurData:
    if depth is None:
        depth = Config.get("schur_depth", 8)
    if depth < 2:
        raise PreconditionError("Schur depth must be at least 2")
    if not Pnorm.is_normalized():
        raise PreconditionError("schur needs a normalized operator d^p + c_(p-2) d^(p-2) + ...")
    p = Pnorm.order
    if Pnorm.precision < depth:
        raise PrecisionError(f"Schur operator of depth {depth}", depth)
    G = GradedOp.from_d1(Pnorm, p)
    comps: Dict[int, Hcp] = {0: Hcp.scalar(p, 1)}
    for t in range(2, depth):
        R = Hcp.zero(p, p - t)
        for s in range(0, t - 1):
            Ss = comps.get(-s)
            Pm = G.comps.get(p - (t - s))
            if Ss is None or Pm is None:
                continue
            R = R + hcp_atom_mul(Ss, Pm)
        Y = bracket_solve(p, R, t)
        if not Y.is_zero():
            comps[-t] = Y
        emit_to(bus, SchurComponentSolved(order=-t, sdeg_a=Y.sdeg_a()))
        logger.debug("S_%d solved, Sdeg_A = %s", -t, Y.sdeg_a())
    S = GradedOp(p, comps, 1 - depth)
    logger.info("Schur operator of order %d computed to depth %d", p, depth)
    return SchurData(p, S, invert_unit(S), depth)


def schur_defect(sd: SchurData, Pnorm: D1Op) -> GradedOp:
    """S P - d^p S on the common known window; zero for a correct S."""
    P = GradedOp.from_d1(Pnorm, sd.p)
    dp = GradedOp.d_power(sd.p, sd.p, sd.depth)
    return graded_mul(sd.S, P) - graded_mul(dp, sd.S)


def sdeg_window_violations(G: GradedOp, p: int) -> List[int]:
    """Orders -t < 0 of nonzero components outside t/p - 1 < Sdeg_A < t."""
    bad = []
    for r, H in G.comps.items():
        if r >= 0:
            continue
        t = -r
        sa = H.sdeg_a()
        if sa == NEG_INF or not (QQ(t, p) - 1 < sa < t):
            bad.append(r)
    return sorted(bad, reverse=True)


def normal_form(Q: D1Op, sd: SchurData) -> GradedOp:
    """S Q S^-1 for Q already in the normalized coordinates of P."""
    Qg = GradedOp.from_d1(Q, sd.p)
    return graded_ops(graded_ops(sd.S, Qg, "mul"), sd.S_inv, "mul")


def qp_tail(p: int) -> Hcp:
    """(-(1/p) x d + sum_i e_i A_i) int^p with e_0 = (p-1)/(2p), e_i = 1/(p (xi^-i - 1))."""
    if p < 2:
        raise PreconditionError("qp_tail needs p >= 2")
    fld = cyclotomic_field(p)
    xa = {(1, 0): QQ(-1, p), (0, 0): QQ(p - 1, 2 * p)}
    for i in range(1, p):
        xa[(0, i)] = ((fld.xi_power(-i) - 1) * p).inverse()
    return Hcp(p, -p, xa)


def qp_tail_vandermonde(p: int) -> Hcp:
    """The same tail with sum_i e_i xi^(i s) = s/p, s < p, solved as a linear system."""
    if p < 2:
        raise PreconditionError("qp_tail needs p >= 2")
    fld = cyclotomic_field(p)
    rows = [[fld.xi_power(i * s) for i in range(p)] for s in range(p)]
    rhs = [QQ(s, p) for s in range(p)]
    e = solve_cyc(rows, rhs, fld)
    xa = {(1, 0): QQ(-1, p)}
    xa.update({(0, i): e[i] for i in range(p)})
    return Hcp(p, -p, xa)


@dataclass
class NormalFormReport:
    central: Dict[int, bool] = field(default_factory=dict)
    tail_central: Optional[bool] = None       # Q_-p - qp_tail(p) central; None when -p is unknown

    def central_except_tail(self, p: int) -> bool:
        return all(ok for r, ok in self.central.items() if r != -p)

    def all_central(self) -> bool:
        return all(self.central.values())


def normal_form_report(Qt: GradedOp, p: int) -> NormalFormReport:
    report = NormalFormReport()
    for r in range(Qt.lo, Qt.top + 1):
        report.central[r] = is_central(Qt.component(r), p)
    if Qt.lo <= -p:
        tail = Qt.component(-p) - qp_tail(p) if p >= 2 else None
        report.tail_central = is_central(tail, p) if tail is not None else None
    return report


def normal_form_pair(P: WeylOp, Q: WeylOp, depth: Optional[int] = None,
                     precision: Optional[int] = None, bus=None) -> Tuple[SchurData, GradedOp]:
    """
    Shift x so that HT(P)(0) != 0, normalize P, build its Schur operator
    and return the normal form of Q in the same coordinates.
    """
    if depth is None:
        depth = Config.get("schur_depth", 8)
    if precision is None:
        precision = max(Config.get("series_precision", 16), depth)
    c, Ps = generic_shift(P)
    Qs = shift_x(Q, c) if c else Q
    p = Ps.d_degree()
    work = precision + 2 * p + 4
    change, Pn = normalize(from_weyl(Ps, work), precision)
    Qn = change.apply(from_weyl(Qs, work))
    sd = schur(Pn, depth, bus)
    sd.change = change
    return sd, normal_form(Qn, sd)

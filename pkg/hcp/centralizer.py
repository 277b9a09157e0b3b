# hcp/centralizer.py
"""
B-freeness and the centralizer of d^k inside Hcpc(k).

The centralizer of d^k is spanned by A_i d^m (m >= 0) and, for
1 <= u <= k - 1, by sum c_j A_j int^u with

    sum_j c_j xi^(j (q - 1)) = 0,    q = 1..u
"""
import logging
from typing import Dict, List, Union

from core.errors import PreconditionError
from exactnum.cyclotomic import CycElem, cyclotomic_field
from exactnum.linalg import rank_cyc
from hcp.atoms import Hcp, Hcpc, d_power, eval_symbol, hcp_commutator, hcp_mul

logger = logging.getLogger(__name__)


def _as_hcpc(H: Union[Hcp, Hcpc]) -> Hcpc:
    return H if isinstance(H, Hcpc) else Hcpc.from_hcp(H)


def is_totally_free_B(H: Union[Hcp, Hcpc]) -> bool:
    """
    True when H D^p carries no B_j for every integer p.

    Only a component E D^(-u) with u > 0 can create B terms, through
    int^u d^p = (1 - B_1 - ... - B_u) d^(p - u) for p >= u; the B_j
    coefficient is -E(j - 1), where E is the symbol without its B part.
    Smaller p produce a subset of these indices and components of
    different orders never cancel.
    """
    for C in _as_hcpc(H):
        if C.b:
            return False
        if C.r < 0:
            if any(eval_symbol(C, n, include_b=False) for n in range(-C.r)):
                return False
    return True


def free_B_by_products(H: Union[Hcp, Hcpc]) -> bool:
    """The same decision by multiplying out H D^p for the relevant p."""
    H = _as_hcpc(H)
    if H.is_zero():
        return True
    span = max(0, -min(H.orders()))
    for p in range(-span - 1, span + 2):
        prod = hcp_mul(H, Hcpc.from_hcp(d_power(p, H.k)))
        if any(C.b for C in prod):
            return False
    return True


def constraint_matrix(k: int, u: int) -> List[List[CycElem]]:
    """Rows q = 1..u, columns j = 0..k-1, entry xi^(j (q - 1))."""
    field = cyclotomic_field(k)
    return [[field.xi_power(j * (q - 1)) for j in range(k)] for q in range(1, u + 1)]


def constraint_rank(k: int, u: int) -> int:
    return rank_cyc(constraint_matrix(k, u), cyclotomic_field(k))


def _tail_element(k: int, u: int, e: int) -> Hcp:
    """Divided difference on the nodes {0, ..., u-1, e}, scaled so c_0 = 1."""
    field = cyclotomic_field(k)
    nodes = list(range(u)) + [e]
    coeffs: Dict[int, CycElem] = {}
    for j in nodes:
        denom = field.one
        for t in nodes:
            if t != j:
                denom = denom * (field.xi_power(j) - field.xi_power(t))
        coeffs[j] = denom.inverse()
    c0 = coeffs[0]
    return Hcp(k, -u, {(0, j): c / c0 for j, c in coeffs.items()})


def centralizer_basis(k: int, l_min: int, l_max: int) -> Dict[int, List[Hcp]]:
    """Basis of the centralizer of d^k per order in [l_min, l_max]."""
    if l_min <= -k:
        raise PreconditionError(f"orders below {-k + 1} are outside the centralizer of d^{k}")
    if l_max < l_min:
        raise PreconditionError("empty order range")
    basis: Dict[int, List[Hcp]] = {}
    for m in range(l_min, l_max + 1):
        if m >= 0:
            basis[m] = [Hcp(k, m, {(0, i): 1}) for i in range(k)]
        else:
            u = -m
            basis[m] = [_tail_element(k, u, e) for e in range(u, k)]
        logger.debug("centralizer of d^%d: %d elements at order %d", k, len(basis[m]), m)
    return basis


def is_central(H: Union[Hcp, Hcpc], k: int) -> bool:
    """Whether [d^k, H] = 0 in the rewriting calculus."""
    H = _as_hcpc(H)
    return hcp_commutator(Hcpc.from_hcp(d_power(k, H.k)), H).is_zero()

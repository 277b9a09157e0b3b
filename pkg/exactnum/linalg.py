# exactnum/linalg.py
"""
Exact linear systems over Q(xi_k).

A system over the cyclotomic field is solved by realification: every entry
a becomes its phi(k) x phi(k) multiplication matrix over QQ and the
resulting rational system goes through DomainMatrix.rref.
"""
import logging
from typing import Any, List, Sequence

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from core.errors import ObstructionError
from exactnum.cyclotomic import CycElem, CycField

logger = logging.getLogger(__name__)


def mult_matrix(a: Any, field: CycField) -> List[List[Any]]:
    """Column t holds the coefficients of a * xi^t."""
    a = field.convert(a)
    deg = field.degree
    cols = [(a * field.xi_power(t)).coeffs for t in range(deg)]
    return [[cols[t][s] for t in range(deg)] for s in range(deg)]


def _realify(rows: Sequence[Sequence[Any]], field: CycField, ncols: int) -> List[List[Any]]:
    deg = field.degree
    zero_block = [[QQ(0)] * deg for _ in range(deg)]
    out: List[List[Any]] = []
    for row in rows:
        blocks = [mult_matrix(a, field) if a else zero_block for a in row]
        for s in range(deg):
            line: List[Any] = []
            for b in blocks:
                line.extend(b[s])
            out.append(line)
    if not out:
        return []
    assert all(len(line) == ncols * deg for line in out)
    return out


def solve_cyc(rows: Sequence[Sequence[Any]], rhs: Sequence[Any], field: CycField) -> List[CycElem]:
    """
    Solve rows * y = rhs over Q(xi_k); free variables are set to zero.

    :raises ObstructionError: when the system is inconsistent; ``obstruction``
        holds the offending reduced row
    """
    nvars = len(rows[0]) if rows else 0
    deg = field.degree
    if nvars == 0:
        if any(field.convert(b) for b in rhs):
            raise ObstructionError("nonzero right-hand side with no unknowns", list(rhs))
        return []
    real = _realify(rows, field, nvars)
    for line, b in zip(range(0, len(real), deg), rhs):
        coeffs = field.convert(b).coeffs
        for s in range(deg):
            real[line + s].append(coeffs[s])
    width = nvars * deg
    mat = DomainMatrix(real, (len(real), width + 1), QQ)
    reduced, pivots = mat.rref()
    dense = reduced.to_list()
    if width in pivots:
        row = dense[list(pivots).index(width)]
        logger.debug("inconsistent system of %d equations in %d unknowns", len(rows), nvars)
        raise ObstructionError("linear system has no solution", row)
    values = [QQ(0)] * width
    for r, p in enumerate(pivots):
        values[p] = dense[r][width]
    return [field.from_dup(list(reversed(values[v * deg:(v + 1) * deg]))) for v in range(nvars)]


def rank_cyc(rows: Sequence[Sequence[Any]], field: CycField) -> int:
    """Rank over Q(xi_k); the realified rank is phi(k) times it."""
    if not rows or not rows[0]:
        return 0
    real = _realify(rows, field, len(rows[0]))
    mat = DomainMatrix(real, (len(real), len(real[0])), QQ)
    return mat.rank() // field.degree

"""Cyclically ordered partitions and the chain complex they span.

A partition here is a tuple of blocks, each block a sorted tuple of vertices,
blocks disjoint and covering {1..n}, with n in the last block (the canonical
representative of the cyclic equivalence class).  The free module in
homological degree k has one basis element per partition into k+1 blocks,
enumerated in the size-reverse lexicographic order (srle): bigger blocks
first, ties broken by the rightmost differing vertex.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from . import intlinalg
from .errors import InternalError, NotIrreducibleError, ValidationError
from .graph_core import CBMatrix, block_echelon_structure, classify
from .poly_ring import (
    GradedContext,
    OrderTower,
    elem_add_term,
    elem_combine,
    elem_str,
)


def canonical_partition(blocks, n):
    """Rotate so that the block containing n comes last; sort each block."""
    blocks = [tuple(sorted(b)) for b in blocks]
    pos = next(i for i, b in enumerate(blocks) if n in b)
    rotated = blocks[pos + 1 :] + blocks[: pos + 1]
    return tuple(rotated)


def _block_key(block, n):
    # bigger blocks first; ties: the largest element not shared comes first
    present = [0] * n
    for v in block:
        present[n - v] = -1
    return (-len(block), tuple(present))


def srle_key(p, n):
    return tuple(_block_key(b, n) for b in p)


def srle_compare(p, q, n):
    """-1, 0, +1 as p precedes, equals, succeeds q (same n, same block count)."""
    if len(p) != len(q):
        raise ValueError("partitions must have the same number of blocks")
    kp, kq = srle_key(p, n), srle_key(q, n)
    return (kp > kq) - (kp < kq)


def _set_partitions(universe, parts):
    """All partitions of a list into `parts` nonempty unordered blocks."""
    if parts == 1:
        yield [list(universe)]
        return
    if len(universe) < parts:
        return
    first, rest = universe[0], universe[1:]
    # first alone in a block, or joined to any block of a smaller partition
    for sub in _set_partitions(rest, parts - 1):
        yield [[first]] + sub
    for sub in _set_partitions(rest, parts):
        for i in range(len(sub)):
            yield sub[:i] + [[first] + sub[i]] + sub[i + 1 :]


def enumerate_basis(n, k):
    """All partitions of {1..n} into k+1 blocks, canonical, in srle order."""
    if not 1 <= k + 1 <= n:
        raise ValueError(f"block count {k + 1} out of range for n={n}")
    out = []
    for blocks in _set_partitions(list(range(1, n + 1)), k + 1):
        last = next(b for b in blocks if n in b)
        others = [tuple(sorted(b)) for b in blocks if b is not last]
        for perm in permutations(others):
            out.append(perm + (tuple(sorted(last)),))
    out.sort(key=lambda p: srle_key(p, n))
    return out


def arrow_monomial(I, J, L: CBMatrix):
    """Exponent vector of prod_{i in I} x_i^(sum of weights from i into J)."""
    if set(I) & set(J):
        raise InternalError(f"arrow monomial with overlapping sets {I}, {J}")
    mono = [0] * L.n
    for i in I:
        mono[i - 1] = sum(L.a[i - 1][j - 1] for j in J)
    return tuple(mono)


def boundary(p, L: CBMatrix, index_below):
    """Image of a basis partition under the differential.

    Adjacent blocks are merged left to right with alternating signs and
    arrow-monomial coefficients; the closing term merges the last block into
    the first.  ``index_below`` maps canonical partitions with one block
    fewer to their basis position.
    """
    k = len(p) - 1
    if k < 1:
        raise ValueError("boundary needs at least two blocks")
    n = L.n
    elem = {}
    for s in range(k):
        mono = arrow_monomial(p[s], p[s + 1], L)
        merged = p[:s] + (tuple(sorted(p[s] + p[s + 1])),) + p[s + 2 :]
        idx = index_below[canonical_partition(merged, n)]
        elem_add_term(elem, idx, Fraction((-1) ** s), mono)
    mono = arrow_monomial(p[k], p[0], L)
    merged = p[1:k] + (tuple(sorted(p[0] + p[k])),)
    idx = index_below[canonical_partition(merged, n)]
    elem_add_term(elem, idx, Fraction(-1), mono)
    return elem


@dataclass
class CycComplex:
    L: CBMatrix
    ctx: GradedContext
    mu: tuple
    bases: list          # bases[k]: srle list of partitions, k = 0..n-1
    index: list          # index[k]: partition -> position
    diffs: list          # diffs[k]: list of Elems in degree k-1, k >= 1
    shifts: list         # shifts[k][j]: weighted degree of basis element
    tower: OrderTower = field(repr=False)

    @property
    def n(self):
        return self.L.n

    def ranks(self):
        return tuple(len(b) for b in self.bases)


def build_complex(L: CBMatrix) -> CycComplex:
    """Assemble bases, differentials, degree shifts and the order tower.

    The matrix must be irreducible and already in block echelon form (use
    graph_core.prepare to reach it); homogeneity of every differential
    column is checked on the way.
    """
    cls = classify(L)
    if cls == "CB":
        raise NotIrreducibleError("complex requires an irreducible matrix")
    if block_echelon_structure(L) is None:
        raise ValidationError(
            "matrix is not in block echelon form; apply the distance enumeration"
        )
    n = L.n
    mu = intlinalg.adjugate_row(L.signed_rows())
    nu = intlinalg.grading_vector(mu)
    ctx = GradedContext(n, nu)
    bases = [enumerate_basis(n, k) for k in range(n)]
    index = [{p: i for i, p in enumerate(b)} for b in bases]
    diffs = [None]
    for k in range(1, n):
        diffs.append([boundary(p, L, index[k - 1]) for p in bases[k]])

    shifts = [[0]]
    for k in range(1, n):
        level = []
        for j, f in enumerate(diffs[k]):
            degs = {
                ctx.degree(m) + shifts[k - 1][p]
                for p, poly in f.items()
                for m in poly
            }
            if len(degs) != 1:
                raise InternalError(
                    f"inhomogeneous differential column {j + 1} in degree {k}"
                )
            level.append(degs.pop())
        shifts.append(level)

    tower = OrderTower(ctx)
    for k in range(1, n):
        tower.add_level(diffs[k])
    return CycComplex(L, ctx, mu, bases, index, diffs, shifts, tower)


def apply_differential(C: CycComplex, k, elem):
    """Image under the degree-k differential of an element of C_k."""
    out = {}
    for j, poly in elem.items():
        for mono, coeff in poly.items():
            elem_combine(out, C.diffs[k][j], coeff, mono)
    return out


def check_d_squared(C: CycComplex) -> bool:
    """Direct composition of consecutive differentials is zero."""
    for k in range(2, C.n):
        for f in C.diffs[k]:
            if apply_differential(C, k - 1, f):
                return False
    return True


def leading_term_formula(C: CycComplex, k, j):
    """Predicted leading term of the j-th differential column in degree k."""
    p = C.bases[k][j]
    merged = p[:-2] + (tuple(sorted(p[-2] + p[-1])),)
    idx = C.index[k - 1][canonical_partition(merged, C.n)]
    mono = arrow_monomial(p[-2], p[-1], C.L)
    return (Fraction((-1) ** (k - 1)), mono, idx)


def check_leading_terms(C: CycComplex) -> bool:
    """Every differential column's maximal term matches the closed formula."""
    for k in range(1, C.n):
        for j in range(len(C.bases[k])):
            found = C.tower.lms[k][j]
            if found != leading_term_formula(C, k, j):
                return False
    return True


def minimality_check(C: CycComplex):
    """(True, None) when no differential entry has a constant term.

    Otherwise returns (False, (k, source index, target index, coefficient))
    for one offending entry.
    """
    unit = C.ctx.unit()
    for k in range(1, C.n):
        for j, f in enumerate(C.diffs[k]):
            for p, poly in f.items():
                if unit in poly:
                    return False, (k, j, p, poly[unit])
    return True, None


def to_json_dict(C: CycComplex):
    return {
        "n": C.n,
        "nu": list(C.ctx.nu),
        "ranks": list(C.ranks()),
        "shifts": [list(level) for level in C.shifts],
        "diffs": [
            [
                {"basis": j + 1, "poly": elem_str(f, C.tower, k - 1)}
                for j, f in enumerate(C.diffs[k])
            ]
            for k in range(1, C.n)
        ],
    }


def export_json(C: CycComplex, indent=None):
    return json.dumps(to_json_dict(C), indent=indent, sort_keys=True)

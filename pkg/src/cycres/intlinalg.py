"""Exact integer and rational linear algebra.

Matrices are lists of rows; integer matrices hold Python ints (arbitrary
precision), rational ones hold ``fractions.Fraction``.  Nothing here ever
touches floating point.
"""

from fractions import Fraction
from math import gcd

from .errors import DimensionError, NotIrreducibleError


def _check_square(m):
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise DimensionError("square matrix required")
    return n


def det(m):
    """Determinant of a square integer matrix by fraction-free elimination.

    Bareiss one-step elimination: every intermediate entry is a minor of the
    input, so the arithmetic stays in the integers.
    """
    n = _check_square(m)
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (pivot * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def minor(m, i, j):
    """Submatrix with row i and column j removed (0-based)."""
    return [
        [row[c] for c in range(len(row)) if c != j]
        for r, row in enumerate(m)
        if r != i
    ]


def adjugate_row(m):
    """The row (|L_{1,1}|, ..., |L_{n,n}|) of principal (n-1)-minors.

    For a Laplacian-type matrix with zero row sums all rows of the adjugate
    agree, so this single row carries the whole adjugate; the diagonal
    cofactor signs are +1.
    """
    n = _check_square(m)
    return tuple(det(minor(m, i, i)) for i in range(n))


def adjugate(m):
    """Full adjugate by the cofactor formula (test oracle; O(n^5))."""
    n = _check_square(m)
    return [
        [(-1) ** (i + j) * det(minor(m, j, i)) for j in range(n)]
        for i in range(n)
    ]


def grading_vector(mu):
    """Divide a positive integer vector by its gcd.

    Raises NotIrreducibleError when some entry is not positive, which is the
    signature of a reducible input matrix.
    """
    if any(x <= 0 for x in mu):
        raise NotIrreducibleError(f"adjugate row {tuple(mu)} is not strictly positive")
    d = 0
    for x in mu:
        d = gcd(d, x)
    return tuple(x // d for x in mu)


def rank(m):
    """Exact rank over the rationals of a dense matrix (int or Fraction)."""
    if not m or not m[0]:
        return 0
    rows = [[Fraction(x) for x in row] for row in m]
    ncols = len(rows[0])
    if any(len(row) != ncols for row in rows):
        raise DimensionError("ragged matrix")
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][c]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                fi = f / pv
                ri, rr = rows[i], rows[r]
                for j in range(c, ncols):
                    ri[j] -= rr[j] * fi
        r += 1
        if r == len(rows):
            break
    return r


def rank_sparse(rows):
    """Exact rank over the rationals of a sparse integer matrix.

    ``rows`` is an iterable of {column: int} dicts.  Elimination keeps rows
    integral (cross-multiplication followed by a gcd division), and pivots
    are chosen to limit fill: sparsest available column first, then the
    shortest row in it, preferring unit entries.
    """
    mat = {}
    for rid, row in enumerate(rows):
        cleaned = {c: v for c, v in row.items() if v}
        if cleaned:
            mat[rid] = cleaned
    col_rows = {}
    for rid, row in mat.items():
        for c in row:
            col_rows.setdefault(c, set()).add(rid)

    def drop_entry(rid, c):
        s = col_rows.get(c)
        if s is not None:
            s.discard(rid)
            if not s:
                del col_rows[c]

    rnk = 0
    while mat:
        c = min(col_rows, key=lambda cc: len(col_rows[cc]))
        pid = min(
            col_rows[c],
            key=lambda rr: (abs(mat[rr][c]) != 1, len(mat[rr]), rr),
        )
        pivot_row = mat.pop(pid)
        for cc in pivot_row:
            drop_entry(pid, cc)
        rnk += 1
        a = pivot_row[c]
        for rid in list(col_rows.get(c, ())):
            row = mat[rid]
            b = row.pop(c)
            drop_entry(rid, c)
            for cc, pv in pivot_row.items():
                if cc == c:
                    continue
                nv = a * row.get(cc, 0) - b * pv
                if nv:
                    if cc not in row:
                        col_rows.setdefault(cc, set()).add(rid)
                    row[cc] = nv
                elif cc in row:
                    del row[cc]
                    drop_entry(rid, cc)
            if a != 1:
                for cc in row:
                    if cc not in pivot_row:
                        row[cc] *= a
            if not row:
                del mat[rid]
                continue
            g = 0
            for v in row.values():
                g = gcd(g, v)
            if g > 1:
                for cc in row:
                    row[cc] //= g
    return rnk

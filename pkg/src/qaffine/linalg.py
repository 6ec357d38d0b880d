"""Exact dense linear algebra over the rational-function field and over
truncated series rings.

Matrices are plain lists of lists.  Entries can be Scalars (field
elements: every nonzero element is a unit) or TruncSeries (local ring:
units are the series with invertible constant term).  Gaussian
elimination always pivots on a unit entry, which is exactly what a
local ring needs; pivot ties are broken by position so results are
reproducible.
"""

from __future__ import annotations

from .scalars import ONE, ZERO, TruncSeries


def el_is_zero(e):
    if isinstance(e, TruncSeries):
        return all(el_is_zero(c) for c in e.coeffs)
    return e == 0


def el_is_unit(e):
    if isinstance(e, TruncSeries):
        return e.is_unit()
    return not el_is_zero(e)


def el_inv(e):
    if isinstance(e, TruncSeries):
        return e.inv()
    return ONE / e


def zeros(r, c, zero=ZERO):
    return [[zero for _ in range(c)] for _ in range(r)]


def identity(n, one=ONE, zero=ZERO):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    rb = len(B)
    cb = len(B[0])
    out = []
    for row in A:
        zero = None
        acc = [None] * cb
        for k in range(rb):
            a = row[k]
            if not isinstance(a, TruncSeries) and el_is_zero(a):
                continue
            Bk = B[k]
            for j in range(cb):
                p = a * Bk[j]
                acc[j] = p if acc[j] is None else acc[j] + p
        for j in range(cb):
            if acc[j] is None:
                if zero is None:
                    zero = row[0] * 0 if row else ZERO
                acc[j] = zero
        out.append(acc)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, s):
    return [[a * s for a in row] for row in A]


def mat_eq(A, B):
    if len(A) != len(B) or len(A[0]) != len(B[0]):
        return False
    return all(el_is_zero(a - b) for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def transpose(A):
    return [list(col) for col in zip(*A)]


def mat_apply(A, v):
    out = []
    for row in A:
        acc = None
        for a, x in zip(row, v):
            if not isinstance(a, TruncSeries) and el_is_zero(a):
                continue
            p = a * x
            acc = p if acc is None else acc + p
        out.append(acc if acc is not None else (row[0] * 0 if row else ZERO))
    return out


def _rref(M, ncols=None):
    """In-place reduced echelon form pivoting on unit entries.

    Returns the list of pivot columns.  Over a field this is ordinary
    RREF; over A_n it succeeds on the unit-pivotable part (enough for
    inverting invertible matrices and for triangular solves).
    """
    rows = len(M)
    cols = ncols if ncols is not None else (len(M[0]) if rows else 0)
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = None
        for i in range(r, rows):
            if el_is_unit(M[i][c]):
                p = i
                break
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = el_inv(M[r][c])
        M[r] = [x * piv for x in M[r]]
        for i in range(rows):
            if i != r and not el_is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return pivots


def rank(A):
    """Rank over the field (entries must be Scalars)."""
    M = [list(row) for row in A]
    return len(_rref(M))


def rref(A):
    M = [list(row) for row in A]
    pivots = _rref(M)
    return M, pivots


def nullspace(A, one=ONE, zero=ZERO):
    """Basis of the right kernel of A over the field; list of vectors."""
    ncols = len(A[0]) if A else 0
    M, pivots = rref(A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = -M[r][fc]
        basis.append(v)
    return basis


def solve(A, rhs_cols):
    """Solve A X = B for X (A square and unit-invertible).  B given as a
    list of columns; returns list of solution columns.  Works over the
    field and over A_n (pivots on units)."""
    n = len(A)
    M = [list(A[i]) + [col[i] for col in rhs_cols] for i in range(n)]
    pivots = _rref(M, ncols=n)
    if len(pivots) != n:
        raise ValueError("matrix is not invertible over the coefficient ring")
    sols = []
    for j in range(len(rhs_cols)):
        sols.append([M[i][n + j] for i in range(n)])
    return sols


def inv_matrix(A):
    n = len(A)
    one = None
    for row in A:
        for e in row:
            one = e * 0 + 1
            break
        break
    cols = [[one * 0 if i != j else one for i in range(n)] for j in range(n)]
    sols = solve(A, cols)
    return [[sols[j][i] for j in range(n)] for i in range(n)]


def solve_underdetermined(A, b):
    """One solution x of A x = b over the field, or None if inconsistent.

    Also returns the pivot structure for uniqueness analysis:
    (x, n_free_columns).
    """
    rows = len(A)
    ncols = len(A[0]) if rows else 0
    M = [list(A[i]) + [b[i]] for i in range(rows)]
    pivots = _rref(M, ncols=ncols)
    for i in range(rows):
        if all(el_is_zero(M[i][c]) for c in range(ncols)) and not el_is_zero(M[i][ncols]):
            return None, 0
    zero = ZERO if not rows else A[0][0] * 0
    x = [zero] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = M[r][ncols]
    return x, ncols - len(pivots)

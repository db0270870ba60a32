"""
Exact linear algebra over F_q.

Matrices are 2-d numpy int64 arrays of element encodings. Two elimination
rules are provided so that rank claims can be confirmed by an independent
pass: :func:`row_reduce` scans columns left to right (column pivot rule),
:func:`incremental_rank` feeds rows one at a time against the pivots found
so far (row pivot rule).
"""

import numpy as np

from .exceptions import DimensionMismatch


def _as_matrix(M):
    M = np.array(M, dtype=np.int64, copy=True)
    if M.ndim != 2:
        raise DimensionMismatch('expected a 2-d matrix, got shape %r'
                                % (M.shape,))
    return M


def row_reduce(field, M):
    """Reduced row echelon form of ``M``.

    Returns ``(R, pivots)`` where ``pivots`` lists the pivot column of each
    nonzero row of ``R``. The pivot of a column is its first nonzero entry
    at or below the current row.
    """
    R = _as_matrix(M)
    n_rows, n_cols = R.shape
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nonzero = np.flatnonzero(R[r:, c])
        if nonzero.size == 0:
            continue
        i = r + int(nonzero[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = field.mul_arr(R[r], field.inv(int(R[r, c])))
        others = np.flatnonzero(R[:, c])
        others = others[others != r]
        if others.size:
            factors = R[others, c][:, None]
            R[others] = field.sub_arr(R[others],
                                      field.mul_arr(factors, R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def incremental_rank(field, M):
    """Rank of ``M`` computed row by row.

    Each incoming row is reduced against the pivot rows kept so far; a
    nonzero remainder becomes a new pivot row keyed by its first nonzero
    column.
    """
    M = _as_matrix(M)
    basis = {}
    for row in M:
        row = row.copy()
        while True:
            nonzero = np.flatnonzero(row)
            if nonzero.size == 0:
                break
            c = int(nonzero[0])
            pivot_row = basis.get(c)
            if pivot_row is None:
                basis[c] = field.mul_arr(row, field.inv(int(row[c])))
                break
            row = field.sub_arr(row, field.mul_arr(pivot_row, int(row[c])))
    return len(basis)


def rank(field, M, rule='column'):
    """Rank of ``M`` with the ``'column'`` or ``'row'`` pivot rule."""
    if rule == 'column':
        return len(row_reduce(field, M)[1])
    if rule == 'row':
        return incremental_rank(field, M)
    raise ValueError("rule must be 'column' or 'row', got %r" % (rule,))


def nullspace(field, M):
    """Basis of the right kernel of ``M``, one vector per free column.

    Vectors are ordered by free column, each with a 1 in its own free column.
    """
    R, pivots = row_reduce(field, M)
    n_cols = R.shape[1]
    pivot_set = set(pivots)
    basis = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        v = np.zeros(n_cols, dtype=np.int64)
        v[free] = 1
        for i, c in enumerate(pivots):
            v[c] = field.neg(int(R[i, free]))
        basis.append(v)
    return basis


def mat_mul(field, A, B):
    """Matrix product over F_q."""
    A = _as_matrix(A)
    B = _as_matrix(B)
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch('cannot multiply %r by %r'
                                % (A.shape, B.shape))
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for j in range(A.shape[1]):
        out = field.add_arr(out, field.mul_arr(A[:, j][:, None],
                                               B[j][None, :]))
    return out


def apply_linear(field, T, points):
    """Image of an array of points (one per row) under the matrix ``T``."""
    T = _as_matrix(T)
    points = np.asarray(points, dtype=np.int64)
    if points.ndim == 1:
        return apply_linear(field, T, points[None, :])[0]
    if points.shape[1] != T.shape[1]:
        raise DimensionMismatch('points of dimension %d for a map from '
                                'F^%d' % (points.shape[1], T.shape[1]))
    return mat_mul(field, points, T.T)


def identity(n):
    return np.eye(n, dtype=np.int64)

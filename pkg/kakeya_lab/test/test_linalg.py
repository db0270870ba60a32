"""
Test exact linear algebra over F_q.
"""

import numpy as np

from kakeya_lab.linalg import (row_reduce, incremental_rank, rank,
                               nullspace, mat_mul, apply_linear, identity)
from kakeya_lab.exceptions import DimensionMismatch
from kakeya_lab.testing import raises, parametrize
from kakeya_lab.test.common import F2, F3, F4, F5, F9


def random_matrix(field, shape, seed):
    return np.random.default_rng(seed).integers(0, field.q, size=shape)


def test_row_reduce_simple():
    R, pivots = row_reduce(F5, [[2, 4, 1], [1, 2, 4]])
    assert pivots == [0, 2]
    assert R.tolist() == [[1, 2, 0], [0, 0, 1]]


@parametrize('field', [F2, F3, F4, F5, F9], ids=repr)
@parametrize('shape', [(3, 5), (6, 4), (5, 5)])
def test_rank_rules_agree(field, shape):
    for seed in range(5):
        M = random_matrix(field, shape, seed)
        # duplicate a combination of rows to force a dependency
        M[-1] = field.add_arr(M[0], field.mul_arr(M[1], 1))
        assert rank(field, M) == rank(field, M, rule='row') \
            == incremental_rank(field, M)


@parametrize('field', [F3, F4, F9], ids=repr)
def test_nullspace_vectors_are_in_the_kernel(field):
    M = random_matrix(field, (3, 6), 7)
    basis = nullspace(field, M)
    assert len(basis) == 6 - rank(field, M)
    for v in basis:
        assert not np.any(mat_mul(field, M, v[:, None]))
    pivots = row_reduce(field, M)[1]
    free = [c for c in range(6) if c not in pivots]
    for v, c in zip(basis, free):
        assert v[c] == 1
        assert all(v[other] == 0 for other in free if other != c)


def test_mat_mul_and_identity():
    A = random_matrix(F9, (3, 4), 1)
    assert np.array_equal(mat_mul(F9, A, identity(4)), A)
    assert np.array_equal(mat_mul(F9, identity(3), A), A)
    with raises(DimensionMismatch):
        mat_mul(F9, A, A)
    with raises(DimensionMismatch):
        row_reduce(F9, [1, 2, 3])


def test_apply_linear():
    T = [[1, 0, 2], [0, 1, 1]]
    assert apply_linear(F3, T, [1, 1, 1]).tolist() == [0, 2]
    points = np.array([[0, 0, 0], [1, 2, 0]])
    assert apply_linear(F3, T, points).tolist() == [[0, 0], [1, 2]]
    with raises(DimensionMismatch):
        apply_linear(F3, T, [1, 1])


def test_rank_unknown_rule():
    with raises(ValueError, match='rule'):
        rank(F3, [[1]], rule='diagonal')

"""Exact linear algebra over the scalar field."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qaffine.linalg import (
    inv_matrix,
    mat_apply,
    mat_eq,
    mat_mul,
    nullspace,
    rank,
    rref,
    solve,
    solve_underdetermined,
)
from qaffine.scalars import CA, ONE, QT, Z, ZERO, sc

ints = st.integers(-5, 5)


def to_mat(rows):
    return [[sc(e) for e in row] for row in rows]


class TestRankNullspace:
    def test_rank_and_nullspace_dims(self):
        A = to_mat([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
        assert rank(A) == 2
        ns = nullspace(A)
        assert len(ns) == 1
        for v in ns:
            assert all(e == ZERO for e in mat_apply(A, v))

    @given(st.lists(st.lists(ints, min_size=3, max_size=3), min_size=2, max_size=4))
    @settings(max_examples=40, deadline=None)
    def test_rank_nullity(self, rows):
        A = to_mat(rows)
        assert rank(A) + len(nullspace(A)) == 3

    def test_symbolic_entries(self):
        A = [[QT, ONE], [QT * QT, QT]]  # rank 1 identically
        assert rank(A) == 1
        ns = nullspace(A)
        assert len(ns) == 1


class TestSolve:
    def test_solve_matches_inverse(self):
        A = to_mat([[2, 1], [1, 1]])
        cols = [[sc(1), sc(3)], [sc(0), sc(5)]]  # right-hand sides, as columns
        X = solve(A, cols)
        for rhs, x in zip(cols, X):
            assert mat_apply(A, x) == rhs
        Ainv = inv_matrix(A)
        for rhs, x in zip(cols, X):
            assert mat_apply(Ainv, rhs) == x

    def test_singular_raises(self):
        A = to_mat([[1, 2], [2, 4]])
        with pytest.raises(ValueError):
            solve(A, [[sc(1), sc(1)]])
        with pytest.raises(ValueError):
            inv_matrix(A)

    def test_symbolic_inverse(self):
        A = [[QT, ONE], [ZERO, Z]]
        Ainv = inv_matrix(A)
        eye = [[ONE, ZERO], [ZERO, ONE]]
        assert mat_eq(mat_mul(A, Ainv), eye)
        assert mat_eq(mat_mul(Ainv, A), eye)

    def test_underdetermined_particular_solution(self):
        A = to_mat([[1, 1, 0], [0, 0, 1]])
        rhs = [sc(3), sc(5)]
        x, nfree = solve_underdetermined(A, rhs)
        assert nfree == 1
        got = mat_apply(A, x)
        assert got[0] == sc(3) and got[1] == sc(5)

    def test_underdetermined_inconsistent(self):
        A = to_mat([[1, 1], [2, 2]])
        x, _ = solve_underdetermined(A, [sc(1), sc(3)])
        assert x is None


class TestRref:
    @given(st.lists(st.lists(ints, min_size=3, max_size=3), min_size=3, max_size=3))
    @settings(max_examples=30, deadline=None)
    def test_rref_idempotent(self, rows):
        A = to_mat(rows)
        R, piv = rref(A)
        R2, piv2 = rref(R)
        assert mat_eq(R, R2)
        assert piv == piv2

    def test_pivots_are_unit_columns(self):
        A = [[QT, CA, ONE], [QT, CA, Z]]
        R, piv = rref(A)
        for r, c in enumerate(piv):
            assert R[r][c] == ONE
            for r2 in range(len(R)):
                if r2 != r:
                    assert R[r2][c] == ZERO


class TestMatOps:
    @given(st.lists(st.lists(ints, min_size=2, max_size=2), min_size=2, max_size=2),
           st.lists(st.lists(ints, min_size=2, max_size=2), min_size=2, max_size=2))
    @settings(max_examples=30, deadline=None)
    def test_mul_apply_consistent(self, r1, r2):
        A, B = to_mat(r1), to_mat(r2)
        AB = mat_mul(A, B)
        v = [ONE, sc(2)]
        assert mat_apply(AB, v) == mat_apply(A, mat_apply(B, v))

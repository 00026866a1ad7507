from __future__ import annotations

import itertools
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix

from normtori.intlat import (
    DimensionError,
    IntMatrix,
    det,
    elementary_divisors,
    hnf,
    is_unimodular,
    kernel_z,
    rank_mod_p,
    snf,
    solve_z,
    spans_lattice,
)


def matrices(max_dim=6, lo=-5, hi=5, min_dim=1):
    return st.integers(min_dim, max_dim).flatmap(
        lambda r: st.integers(min_dim, max_dim).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


def minors_divisors(A):
    """Elementary divisors from gcds of k x k minors (brute force)."""
    M = Matrix(A)
    r, c = M.shape
    out, prev = [], 1
    for k in range(1, min(r, c) + 1):
        g = 0
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(c), k):
                g = gcd(g, int(M.extract(list(rows), list(cols)).det()))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def check_smith(A, d):
    U, S, V = d.U, d.S, d.V
    assert U @ IntMatrix(A, cols=len(A[0]) if A else 0) @ V == S
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = d.diagonal
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert diag[: len(nz)] == nz
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    for i in range(S.rows):
        for j in range(S.cols):
            if i != j:
                assert S[i, j] == 0


def test_snf_small_example():
    d = snf([[2, 4], [6, 8]])
    assert d.diagonal == [2, 4]
    assert minors_divisors([[2, 4], [6, 8]]) == [2, 4]
    check_smith([[2, 4], [6, 8]], d)


def test_snf_identity_and_zero():
    d = snf(IntMatrix.identity(4))
    assert d.S == IntMatrix.identity(4)
    d = snf(IntMatrix.zeros(3, 2))
    assert d.S.is_zero() and d.S.shape == (3, 2)


def test_snf_empty_shapes():
    for r, c in [(0, 3), (3, 0), (0, 0)]:
        d = snf(IntMatrix.zeros(r, c))
        assert d.S.shape == (r, c)
        assert d.U.shape == (r, r) and d.V.shape == (c, c)


def test_snf_random_reconstruction():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        r, c = rng.integers(1, 7, size=2)
        A = rng.integers(-5, 6, size=(r, c)).tolist()
        check_smith(A, snf(A))


@settings(max_examples=60, deadline=None)
@given(matrices(max_dim=4, lo=-6, hi=6))
def test_snf_matches_minor_gcds(A):
    assert [x for x in snf(A).diagonal if x] == minors_divisors(A)


def test_snf_large_entries_exact():
    A = [[2**80 + 1, 3**50], [7**30, 2**70 - 3]]
    d = snf(A)
    check_smith(A, d)
    assert d.diagonal[0] * d.diagonal[1] == abs(int(Matrix(A).det()))


def test_hnf_row_space():
    A = [[4, 6, 2], [2, 3, 1], [0, 5, 5]]
    H, T = hnf(A, transform=True)
    assert T @ IntMatrix(A) == H
    assert abs(det(T)) == 1


def test_solve_examples():
    s = solve_z([[2]], [4])
    assert s.particular == [2] and s.kernel_basis == []
    assert solve_z([[2]], [3]).particular is None
    s = solve_z([[1, 1]], [0])
    assert s.particular == [0, 0]
    assert len(s.kernel_basis) == 1 and sorted(map(abs, s.kernel_basis[0])) == [1, 1]
    assert s.kernel_basis[0][0] == -s.kernel_basis[0][1]


def test_solve_dimension_mismatch():
    with pytest.raises(DimensionError):
        solve_z([[1, 2]], [1, 2])


@settings(max_examples=80, deadline=None)
@given(matrices(max_dim=3, lo=-4, hi=4), st.lists(st.integers(-6, 6), min_size=3, max_size=3))
def test_solve_sound_and_complete(A, bfull):
    b = bfull[: len(A)]
    s = solve_z(A, b)
    M = IntMatrix(A)
    if s.particular is not None:
        assert M.apply(s.particular) == b
    else:
        box = range(-20, 21)
        for x in itertools.product(box, repeat=M.cols):
            assert M.apply(list(x)) != b
    for v in s.kernel_basis:
        assert M.apply(v) == [0] * M.rows
    assert len(s.kernel_basis) == M.cols - Matrix(A).rank()


def test_kernel_examples():
    (v,) = kernel_z([[1, 2], [2, 4]])
    assert v in ([2, -1], [-2, 1])
    for x, y in itertools.product(range(-6, 7), repeat=2):
        if x + 2 * y == 0:
            assert (x, y) in {(k * v[0], k * v[1]) for k in range(-6, 7)}
    assert kernel_z(IntMatrix.identity(3)) == []
    assert sorted(kernel_z(IntMatrix.zeros(0, 3))) == sorted([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


@settings(max_examples=80, deadline=None)
@given(matrices(max_dim=5, lo=-5, hi=5))
def test_kernel_saturated(A):
    K = kernel_z(A)
    M = IntMatrix(A)
    for v in K:
        assert M.apply(v) == [0] * M.rows
    assert len(K) == M.cols - Matrix(A).rank()
    if K:
        # saturation: the basis stays independent modulo every small prime
        for p in (2, 3, 5, 7):
            assert rank_mod_p(K, p) == len(K)


def test_kernel_matches_sympy_nullspace_dimension():
    rng = np.random.default_rng(3)
    for _ in range(50):
        A = rng.integers(-3, 4, size=(3, 6)).tolist()
        assert len(kernel_z(A)) == len(Matrix(A).nullspace())


def test_is_unimodular():
    assert is_unimodular(IntMatrix.identity(5))
    assert not is_unimodular([[2, 0], [0, 1]])
    assert is_unimodular([[2, 1], [1, 1]])
    with pytest.raises(DimensionError):
        is_unimodular([[1, 2, 3]])


def test_spans_lattice():
    assert spans_lattice([[1, 0], [1, 1]], 2)
    assert not spans_lattice([[2, 0], [0, 1]], 2)
    assert spans_lattice([[2, 0], [3, 0], [0, 1]], 2)
    assert not spans_lattice([[1, 1]], 2)


def test_elementary_divisors():
    assert elementary_divisors([[2, 0], [0, 3]]) == [1, 6]

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix

from normtori.catalog import cyclic
from normtori.cohom import (
    AbelianGroupStructure,
    h1,
    h1_bar,
    is_coflabby,
    is_flabby,
    norm_matrix,
    tate_h0,
    tate_hminus1,
)
from normtori.glattice import (
    GLattice,
    chevalley_module,
    direct_sum,
    dual,
    permutation_lattice,
    trivial_lattice,
)
from normtori.permgrp import CapError, cosets, is_cyclic, point_stabilizer, subgroup_classes

from conftest import group, table

SMALL = ["5T2", "5T3", "6T3", "6T4", "8T3", "8T4", "8T5", "9T2", "10T3", "7T3", "5T4"]


def sign_lattice():
    return chevalley_module(cyclic(2))


def primary_parts(s):
    """Multiset of prime-power cyclic factors (basis-free comparison)."""
    out = []
    for d in s.elementary_divisors:
        n, p = d, 2
        while n > 1:
            q = 1
            while n % p == 0:
                n //= p
                q *= p
            if q > 1:
                out.append(q)
            p += 1
    return sorted(out)


def orbit_stabilizer_orders(H, ct):
    n = len(ct)
    seen, out = set(), []
    mats = [ct.action_of(h).img for h in H.gens]
    for start in range(n):
        if start in seen:
            continue
        orbit, stack = {start}, [start]
        while stack:
            x = stack.pop()
            for m in mats:
                if m[x] not in orbit:
                    orbit.add(m[x])
                    stack.append(m[x])
        seen |= orbit
        out.append(H.order() // len(orbit))
    return out


def test_norm_matrix_examples():
    J = chevalley_module(group("10T3"))
    one = table("10T3").representatives[0]
    assert np.array_equal(norm_matrix(J, one), np.eye(9, dtype=np.int64))
    S = sign_lattice()
    assert norm_matrix(S).tolist() == [[0]]
    for n in (2, 3, 5):
        assert norm_matrix(trivial_lattice(cyclic(n))).tolist() == [[n]]


def test_tate_h0_examples():
    for n in (2, 3, 4, 6):
        assert tate_h0(trivial_lattice(cyclic(n))).elementary_divisors == (n,)
    G, t = group("10T3"), table("10T3")
    free = permutation_lattice(G, t.representatives[0])
    for H in t.representatives:
        assert tate_h0(free, H).is_trivial
    assert tate_h0(sign_lattice()).is_trivial


def test_tate_hminus1_examples():
    assert tate_hminus1(sign_lattice()).elementary_divisors == (2,)
    G, t = group("10T3"), table("10T3")
    Z = trivial_lattice(G)
    for H in t.representatives:
        assert tate_hminus1(Z, H).is_trivial


def test_h1_examples():
    G, t = group("10T3"), table("10T3")
    Z = trivial_lattice(G)
    for H in t.representatives:
        assert h1(Z, H).is_trivial
    C4 = cyclic(4)
    assert h1(permutation_lattice(C4, point_stabilizer(C4, 1))).is_trivial
    assert h1(sign_lattice()).elementary_divisors == (2,)
    assert h1_bar(sign_lattice()).elementary_divisors == (2,)


def test_h1_cap():
    G = group("10T3")
    with pytest.raises(CapError):
        h1(trivial_lattice(G), G, cap=10)


def test_flabby_predicates_on_sign_lattice():
    S = sign_lattice()
    t = subgroup_classes(S.group)
    assert not is_flabby(S, t)
    assert not is_coflabby(S, t)


@pytest.mark.parametrize("label", SMALL)
def test_shapiro_vanishing(label):
    G, t = group(label), table(label)
    for K in t.representatives:
        ct = cosets(G, K)
        P = permutation_lattice(G, K, ct)
        assert is_flabby(P, t) and is_coflabby(P, t)
        for H in t.representatives:
            assert tate_hminus1(P, H).is_trivial
            assert h1(P, H).is_trivial
            expected = 1
            for s in orbit_stabilizer_orders(H, ct):
                expected *= s
            assert tate_h0(P, H).order == expected


@pytest.mark.parametrize("label", ["5T3", "6T4", "8T3", "10T3", "9T2"])
def test_h1_generator_method_matches_bar_complex(label):
    G, t = group(label), table(label)
    J = chevalley_module(G)
    for M in (J, dual(J)):
        for H in t.representatives:
            assert h1(M, H) == h1_bar(M, H)


@pytest.mark.parametrize("label", ["5T3", "6T4", "10T3"])
def test_additivity(label):
    G, t = group(label), table(label)
    J = chevalley_module(G)
    A, B = J, dual(J)
    S = direct_sum([A, B])
    for H in t.representatives:
        for f in (tate_h0, tate_hminus1, h1):
            assert primary_parts(f(S, H)) == sorted(primary_parts(f(A, H)) + primary_parts(f(B, H)))


def random_unimodular(n, rng):
    U = np.eye(n, dtype=np.int64)
    for _ in range(3 * n):
        i, j = rng.choice(n, size=2, replace=False)
        E = np.eye(n, dtype=np.int64)
        E[i, j] = int(rng.integers(-2, 3))
        U = U @ E
    return U


def conjugate(M, U):
    Ui = np.array(Matrix(U.tolist()).inv().tolist(), dtype=np.int64)
    return GLattice(M.group, [U @ A @ Ui for A in M.gen_matrices], M.rank)


def random_lattice(label, seed):
    rng = np.random.default_rng(seed)
    G, t = group(label), table(label)
    J = chevalley_module(G)
    pool = [J, dual(J)] + [permutation_lattice(G, K) for K in t.representatives[1:3]]
    k = int(rng.integers(1, 3))
    parts = [pool[int(i)] for i in rng.choice(len(pool), size=k)]
    M = direct_sum(parts) if len(parts) > 1 else parts[0]
    return conjugate(M, random_unimodular(M.rank, rng))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["5T2", "5T3", "6T4", "8T3", "10T3"]), st.integers(0, 10**6))
def test_random_lattice_properties(label, seed):
    M = random_lattice(label, seed)
    assert M.is_homomorphism()
    t = table(label)
    for H in t.representatives:
        for f in (tate_h0, tate_hminus1, h1):
            s = f(M, H)
            assert s.free_rank == 0
            assert H.order() ** M.rank % s.order == 0
        if is_cyclic(H):
            # periodicity for cyclic groups
            assert tate_hminus1(M, H).order == h1(M, H).order


def test_abelian_structure_from_relations():
    s = AbelianGroupStructure.from_relations([[2, 0], [0, 3]], 2)
    assert s.elementary_divisors == (6,) and s.order == 6
    assert AbelianGroupStructure.from_relations([], 2).free_rank == 2
    assert str(AbelianGroupStructure()) == "0"

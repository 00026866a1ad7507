from __future__ import annotations

import numpy as np
import pytest

from normtori.catalog import cyclic, dihedral
from normtori.glattice import (
    GMap,
    chevalley_module,
    direct_sum,
    dual,
    fixed_sublattice,
    permutation_lattice,
    restrict,
    trivial_lattice,
)
from normtori.glattice import points_lattice
from normtori.intlat import kernel_z
from normtori.permgrp import cosets, group_from_generators, orbit_count, point_stabilizer

from conftest import group, table


def same(M, N):
    return M.rank == N.rank and all(np.array_equal(a, b) for a, b in zip(M.gen_matrices, N.gen_matrices))


def test_permutation_lattice_examples():
    G = cyclic(2)
    Z = permutation_lattice(G, G)
    assert Z.rank == 1 and Z.gen_matrices[0].tolist() == [[1]]
    trivial = point_stabilizer(G, 1)
    R = permutation_lattice(G, trivial)
    assert R.gen_matrices[0].tolist() == [[0, 1], [1, 0]]
    D = group("10T3")
    t = table("10T3")
    C5 = t.representatives[t.orders.index(5)]
    assert permutation_lattice(D, C5).rank == 4


def test_chevalley_examples():
    J = chevalley_module(group_from_generators(3, ["(1 2 3)"]))
    assert J.gen_matrices[0].tolist() == [[0, 1], [-1, -1]]
    J = chevalley_module(cyclic(2))
    assert J.gen_matrices[0].tolist() == [[-1]]
    assert chevalley_module(group("10T3")).rank == 9


def test_chevalley_rejects_intransitive():
    with pytest.raises(ValueError):
        chevalley_module(group_from_generators(4, ["(1 2)"]))


@pytest.mark.parametrize("label", ["5T3", "6T4", "7T3", "8T12", "10T3", "9T27"])
def test_homomorphism_and_unimodular(label):
    J = chevalley_module(group(label))
    assert J.is_homomorphism()
    assert J.is_unimodular()
    assert dual(J).is_homomorphism()


@pytest.mark.parametrize("label", ["5T3", "6T4", "8T14", "10T3"])
def test_chevalley_exactness(label):
    G = group(label)
    n = G.degree
    P, J = points_lattice(G), chevalley_module(G)
    X = np.zeros((n, n - 1), dtype=np.int64)
    X[: n - 1, :] = np.eye(n - 1, dtype=np.int64)
    X[n - 1, :] = -1
    f = GMap(P, J, X)
    assert f.is_equivariant()
    # left kernel of X is spanned by the all-ones row vector
    K = kernel_z(X.T.tolist())
    assert K in ([[1] * n], [[-1] * n])


def test_dual_involution_and_permutation_self_dual():
    for label in ("5T3", "10T3", "6T4"):
        J = chevalley_module(group(label))
        assert same(dual(dual(J)), J)
        G, t = group(label), table(label)
        for K in t.representatives:
            P = permutation_lattice(G, K)
            assert same(dual(P), P)
    S = chevalley_module(cyclic(2))
    assert same(dual(S), S)


def test_direct_sum():
    G, t = group("10T3"), table("10T3")
    Z = trivial_lattice(G)
    assert direct_sum([Z]) is Z
    C2 = permutation_lattice(G, t.representatives[1])
    C5 = permutation_lattice(G, t.representatives[5])
    S = direct_sum([Z, C2, C5])
    assert S.rank == 15
    assert S.is_homomorphism()
    with pytest.raises(ValueError):
        direct_sum([Z, trivial_lattice(cyclic(3))])


def test_restrict():
    G = group("10T3")
    J = chevalley_module(G)
    one = table("10T3").representatives[0]
    R = restrict(J, one)
    assert R.rank == 9 and all(np.array_equal(m, np.eye(9)) for m in R.gen_matrices)
    with pytest.raises(ValueError):
        restrict(J, group_from_generators(10, ["(1 2)"]))


@pytest.mark.parametrize("label", ["10T5", "10T12", "8T14"])
def test_restrict_chevalley_to_transitive_subgroup(label):
    G, t = group(label), table(label)
    J = chevalley_module(G)
    for i in t.transitive_classes():
        K = t.representatives[i]
        assert same(restrict(J, K), chevalley_module(K))


def test_restrict_permutation_lattice_orbits():
    G, t = group("10T3"), table("10T3")
    for K in t.representatives:
        ct = cosets(G, K)
        P = permutation_lattice(G, K, ct)
        for H in t.representatives:
            R = restrict(P, H)
            # H-orbits on G/K are the orbits of the restricted permutation matrices
            images = [np.argmax(A, axis=1) for A in R.gen_matrices]
            parent = list(range(P.rank))

            def find(x):
                while parent[x] != x:
                    x = parent[x]
                return x

            for img in images:
                for i, j in enumerate(img):
                    parent[find(i)] = find(int(j))
            sizes = {}
            for i in range(P.rank):
                sizes[find(i)] = sizes.get(find(i), 0) + 1
            assert len(sizes) == orbit_count(H, ct)
            assert sum(sizes.values()) == P.rank


def test_fixed_sublattice_examples():
    S = chevalley_module(cyclic(2))
    assert fixed_sublattice(S, S.group) == []
    J3 = chevalley_module(group_from_generators(3, ["(1 2 3)"]))
    assert fixed_sublattice(J3, J3.group) == []
    D = dihedral(5)
    P = permutation_lattice(D, point_stabilizer(D, 1))
    assert len(fixed_sublattice(P, D)) == 1


@pytest.mark.parametrize("label", ["5T3", "6T4", "8T3", "8T14", "10T3", "10T4", "10T5", "7T3"])
def test_fixed_rank_equals_orbit_count(label):
    G, t = group(label), table(label)
    assert G.order() <= 200
    for K in t.representatives:
        ct = cosets(G, K)
        P = permutation_lattice(G, K, ct)
        for H in t.representatives:
            assert len(fixed_sublattice(P, H)) == orbit_count(H, ct)


def test_fixed_sublattice_is_fixed():
    G, t = group("10T3"), table("10T3")
    J = chevalley_module(G)
    for H in t.representatives:
        for v in fixed_sublattice(J, H):
            for h in H.gens:
                assert (np.array(v) @ J.matrix(h)).tolist() == v

from __future__ import annotations

import pytest

from normtori.catalog import cyclic, dihedral, frobenius, symmetric, alternating
from normtori.permgrp import (
    CapError,
    Perm,
    PermGroup,
    all_sylow_cyclic,
    cosets,
    group_from_generators,
    is_cyclic,
    is_nilpotent,
    is_transitive,
    metacyclic_form,
    normal_core,
    odd_cr_c2_form,
    orbit_count,
    point_stabilizer,
    subgroup_classes,
    sylow,
)

from conftest import group, table


def compose(a, b):
    # apply a first, then b
    return tuple(b[x] for x in a)


def inverse(a):
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def all_subgroups(G):
    """Every subgroup as a frozenset of elements, by closing cyclic subgroups under joins."""
    elems = G.elements
    ident = tuple(range(G.degree))

    def close(gens):
        S = {ident}
        frontier = [ident]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = compose(x, g)
                    if y not in S:
                        S.add(y)
                        new.append(y)
            frontier = new
        return frozenset(S)

    cyc = {close([g]) for g in elems}
    subs = set(cyc)
    frontier = set(cyc)
    while frontier:
        new = set()
        for A in frontier:
            for C in cyc:
                if C <= A:
                    continue
                J = close(list(A) + list(C))
                if J not in subs:
                    new.add(J)
        subs |= new
        frontier = new
    return subs


D20 = ["(1 2 3 4 5 6 7 8 9 10)", "(2 10)(3 9)(4 8)(5 7)"]


def test_group_from_generators_examples():
    assert group_from_generators(10, D20).order() == 20
    assert group_from_generators(7, []).order() == 1
    assert group_from_generators(5, ["(1 2 3 4 5)", "(2 3 5 4)"]).order() == 20


def test_malformed_permutation_rejected():
    with pytest.raises(ValueError):
        Perm.from_images([1, 1, 2])
    with pytest.raises(ValueError):
        group_from_generators(3, ["(1 2 3 4)"])


def test_order_cap_error():
    G = symmetric(7)
    G.order_cap = 100
    with pytest.raises(CapError):
        subgroup_classes(G, 100)


def test_subgroup_classes_dihedral_20():
    t = subgroup_classes(group_from_generators(10, D20))
    assert t.names() == ["1", "C2", "C2", "C2", "C2 x C2", "C5", "D10", "D10", "C10", "D20"]


def test_subgroup_classes_cyclic():
    for p in (2, 3, 5, 7):
        assert subgroup_classes(cyclic(p)).orders == [1, p]
    assert subgroup_classes(cyclic(6)).orders == [1, 2, 3, 6]


@pytest.mark.parametrize(
    "G,count",
    [
        (symmetric(3), 6),
        (symmetric(4), 30),
        (alternating(4), 10),
        (dihedral(5), 8),
        (frobenius(5, 4), 14),
        (alternating(5), 59),
    ],
)
def test_total_subgroups_known(G, count):
    assert subgroup_classes(G).total_subgroups() == count


@pytest.mark.parametrize("label", ["5T2", "5T3", "6T2", "6T3", "6T4", "8T2", "8T3", "8T4", "8T5", "9T2", "10T3", "5T4"])
def test_total_subgroups_brute_force(label):
    G = group(label)
    t = table(label)
    assert t.total_subgroups() == len(all_subgroups(G))
    for H in t.representatives:
        assert G.order() % H.order() == 0


@pytest.mark.parametrize("label", ["5T3", "6T4", "8T3", "10T3", "7T3", "8T12", "8T14", "10T4"])
def test_sylow_properties(label):
    G = group(label)
    n = G.order()
    for p in (2, 3, 5, 7):
        P = sylow(G, p)
        pp = 1
        while n % (pp * p) == 0:
            pp *= p
        assert P.order() == pp
        S = frozenset(P.elements)
        conj = {frozenset(compose(compose(inverse(g), x), g) for x in S) for g in G.elements}
        assert len(conj) % p == 1 % p


def test_sylow_f20():
    F = frobenius(5, 4)
    P2 = sylow(F, 2)
    assert P2.order() == 4 and is_cyclic(P2)
    assert sylow(F, 5).order() == 5
    assert sylow(F, 3).order() == 1
    assert all_sylow_cyclic(F)


def test_cosets_examples():
    S3 = symmetric(3)
    H = point_stabilizer(S3, 1)
    ct = cosets(S3, H)
    assert len(ct) == 3 and ct.representatives[0].is_identity()
    assert is_transitive(PermGroup(3, ct.generator_action))
    ct = cosets(S3, S3)
    assert len(ct) == 1 and all(g.is_identity() for g in ct.generator_action)
    G = group_from_generators(10, D20)
    t = subgroup_classes(G)
    assert len(cosets(G, t.representatives[1])) == 10


def test_cosets_rejects_non_subgroup():
    G = group_from_generators(10, D20)
    H = group_from_generators(10, ["(1 2)"])
    with pytest.raises(ValueError):
        cosets(G, H)


@pytest.mark.parametrize("label", ["6T4", "8T14", "10T3", "7T3"])
def test_coset_actions_transitive(label):
    G, t = group(label), table(label)
    for K in t.representatives:
        ct = cosets(G, K)
        assert len(ct) * K.order() == G.order()
        assert len(PermGroup(len(ct), ct.generator_action).orbits()) == 1


def test_orbit_count_c5_on_reflection_cosets():
    G = group_from_generators(10, D20)
    t = subgroup_classes(G)
    C5 = t.representatives[t.orders.index(5)]
    assert orbit_count(C5, cosets(G, t.representatives[1])) == 2


@pytest.mark.parametrize("label", ["5T3", "6T4", "8T12", "9T27", "10T7"])
def test_point_stabilizer_core_trivial(label):
    G = group(label)
    assert normal_core(G, point_stabilizer(G, 1)).order() == 1


def test_nilpotent():
    assert is_nilpotent(group("8T4"))
    assert not is_nilpotent(symmetric(3))
    assert is_nilpotent(cyclic(6))


def test_metacyclic_form():
    assert metacyclic_form(cyclic(8)) == (1, 3, 1)
    m, d, r = metacyclic_form(dihedral(5))
    assert (m, d, r % 5) == (5, 1, 4)
    assert metacyclic_form(group("9T2")) is None


def test_odd_cr_c2_form():
    D5 = dihedral(5)
    assert odd_cr_c2_form(D5, point_stabilizer(D5, 1))
    F = frobenius(5, 4)
    assert not odd_cr_c2_form(F, point_stabilizer(F, 1))
    C6 = cyclic(6)
    assert not odd_cr_c2_form(C6, point_stabilizer(C6, 1))

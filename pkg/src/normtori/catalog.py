"""A small catalog of transitive permutation groups.

Labels follow the ``nTm`` convention for the groups listed in :data:`CURATED`;
family labels ``C(n)``, ``D(n)``, ``F(p,m)``, ``S(n)`` and ``A(n)`` build cyclic,
dihedral, Frobenius, symmetric and alternating groups, and ``X*Y`` is the
product action of two labels.  Every curated entry carries its expected
order and a few structural facts that :func:`self_test` re-checks.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from sympy import isprime
from sympy.ntheory import n_order, primitive_root

from .permgrp import (
    DEFAULT_ORDER_CAP,
    Perm,
    PermGroup,
    all_sylow_cyclic,
    cosets,
    is_normal,
    is_transitive,
    structure_name,
    subgroup_classes,
    sylow,
)

__all__ = [
    "CatalogError",
    "CatalogEntry",
    "CURATED",
    "cyclic",
    "dihedral",
    "frobenius",
    "symmetric",
    "alternating",
    "product_action",
    "coset_action",
    "lookup",
    "labels",
    "self_test",
]


class CatalogError(KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown label"


# ---------------------------------------------------------------------------
# constructive families (0-based images)


def _group(degree: int, gens: Sequence[Sequence[int]], name: str) -> PermGroup:
    return PermGroup(degree, [Perm(g) for g in gens], DEFAULT_ORDER_CAP, name=name)


def cyclic(n: int) -> PermGroup:
    """``C_n`` acting regularly on ``n`` points."""
    return _group(n, [[(i + 1) % n for i in range(n)]], f"C({n})")


def dihedral(n: int) -> PermGroup:
    """Symmetries of the ``n``-gon (order ``2n``)."""
    return _group(n, [[(i + 1) % n for i in range(n)], [(-i) % n for i in range(n)]], f"D({n})")


def frobenius(p: int, m: int) -> PermGroup:
    """``C_p : C_m`` acting on ``Z/p`` by ``x -> a x + b`` with ``a`` of order ``m``."""
    if not isprime(p) or m < 1 or (p - 1) % m:
        raise CatalogError(f"F({p},{m}) needs a prime p and m dividing p - 1")
    a = pow(primitive_root(p), (p - 1) // m, p)
    assert n_order(a, p) == m or m == 1
    gens = [[(i + 1) % p for i in range(p)]]
    if m > 1:
        gens.append([(a * i) % p for i in range(p)])
    return _group(p, gens, f"F({p},{m})")


def symmetric(n: int) -> PermGroup:
    gens = [[(i + 1) % n for i in range(n)]]
    if n > 2:
        gens.append([1, 0] + list(range(2, n)))
    return _group(n, gens, f"S({n})")


def alternating(n: int) -> PermGroup:
    if n < 3:
        return _group(n, [list(range(n))], f"A({n})")
    # 3-cycles (0 1 k) generate A_n
    gens = []
    for k in range(2, n):
        g = list(range(n))
        g[0], g[1], g[k] = 1, k, 0
        gens.append(g)
    return _group(n, gens, f"A({n})")


def product_action(G1: PermGroup, G2: PermGroup, name: Optional[str] = None) -> PermGroup:
    """``G1 x G2`` on pairs ``(i, j)``, encoded as ``i * deg2 + j``."""
    d1, d2 = G1.degree, G2.degree
    gens = []
    for g in G1.gens:
        gens.append([g.img[i] * d2 + j for i in range(d1) for j in range(d2)])
    for h in G2.gens:
        gens.append([i * d2 + h.img[j] for i in range(d1) for j in range(d2)])
    return _group(d1 * d2, gens, name or f"{G1.name}*{G2.name}")


def coset_action(G: PermGroup, H: Optional[PermGroup] = None, name: Optional[str] = None) -> PermGroup:
    """Action of ``G`` on the right cosets of ``H`` (regular when ``H`` is None)."""
    if H is None:
        H = G.subgroup_by_indices([0])
    t = cosets(G, H)
    return _group(len(t), [p.img for p in t.generator_action], name or "")


def _sign_twist(G: PermGroup, name: str) -> PermGroup:
    """``{(g, sign g)}`` acting on ``points x {0, 1}``."""
    n = G.degree
    gens = []
    for g in G.gens:
        s = 0 if g.sign() == 1 else 1
        gens.append([g.img[i] * 2 + (j ^ s) for i in range(n) for j in range(2)])
    return _group(2 * n, gens, name)


def _two_blocks(twist: Callable[[int], int], name: str) -> PermGroup:
    """``C_5^2`` on two blocks of five, extended by ``(0,x) -> (1,x), (1,x) -> (0,twist(x))``."""
    a = [(i + 1) % 5 if i < 5 else i for i in range(10)]
    t = [5 + i if i < 5 else twist(i - 5) for i in range(10)]
    return _group(10, [a, t], name)


def _wreath_c5_c2() -> PermGroup:
    a = [(i + 1) % 5 if i < 5 else i for i in range(10)]
    s = [(i + 5) % 10 for i in range(10)]
    return _group(10, [a, s], "C5 wr C2")


def _even_signs_c5() -> PermGroup:
    # points 2i + j; flip blocks 0 and 1 together, rotate the five blocks
    f = [1, 0, 3, 2] + list(range(4, 10))
    r = [((i // 2 + 1) % 5) * 2 + i % 2 for i in range(10)]
    return _group(10, [f, r], "2^4 : C5")


def _pairs_action(G: PermGroup, name: str) -> PermGroup:
    """Action on the 2-subsets of the points."""
    pairs = list(itertools.combinations(range(G.degree), 2))
    pos = {p: i for i, p in enumerate(pairs)}
    gens = [[pos[tuple(sorted((g.img[a], g.img[b])))] for a, b in pairs] for g in G.gens]
    return _group(len(pairs), gens, name)


def _gl3_2() -> PermGroup:
    vecs = [v for v in itertools.product((0, 1), repeat=3) if any(v)]
    pos = {v: i for i, v in enumerate(vecs)}

    def act(M):
        return [pos[tuple(sum(v[r] * M[r][c] for r in range(3)) % 2 for c in range(3))] for v in vecs]

    return _group(7, [act([[0, 1, 0], [0, 0, 1], [1, 0, 1]]), act([[1, 1, 0], [0, 1, 0], [0, 0, 1]])], "PSL(3,2)")


def _sl2_3() -> PermGroup:
    vecs = [v for v in itertools.product(range(3), repeat=2) if any(v)]
    pos = {v: i for i, v in enumerate(vecs)}

    def act(M):
        return [pos[tuple(sum(v[r] * M[r][c] for r in range(2)) % 3 for c in range(2))] for v in vecs]

    return _group(8, [act([[1, 1], [0, 1]]), act([[1, 0], [1, 1]])], "SL(2,3)")


def _psl2_8() -> PermGroup:
    """``PSL_2(F_8)`` on the projective line, ``F_8 = F_2[x]/(x^3 + x + 1)``."""

    def mul(a, b):
        r = 0
        for i in range(3):
            if b >> i & 1:
                r ^= a << i
        for i in (4, 3):
            if r >> i & 1:
                r ^= 0b1011 << (i - 3)
        return r

    inv = {a: next(b for b in range(1, 8) if mul(a, b) == 1) for a in range(1, 8)}
    inf = 8

    def shift(z):
        return inf if z == inf else z ^ 1

    def scale(z):
        return inf if z == inf else mul(2, z)

    def invert(z):
        return 0 if z == inf else inf if z == 0 else inv[z]

    return _group(9, [[f(z) for z in range(9)] for f in (shift, scale, invert)], "PSL(2,8)")


def _quaternion() -> PermGroup:
    # regular representation on {+-1, +-i, +-j, +-k}
    names = ["1", "i", "j", "k"]
    table = {
        ("1", x): (1, x) for x in names
    }
    rules = {("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
             ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
             ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")}
    table.update(rules)
    for x in names:
        table[(x, "1")] = (1, x)
    elems = [(s, x) for s in (1, -1) for x in names]
    pos = {e: i for i, e in enumerate(elems)}

    def right(g):
        out = []
        for s, x in elems:
            t, y = table[(x, g)]
            out.append(pos[(s * t, y)])
        return out

    return _group(8, [right("i"), right("j")], "Q8")


# ---------------------------------------------------------------------------
# curated entries


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    build: Callable[[], PermGroup]
    order: int
    structure: Optional[str] = None
    facts: dict = field(default_factory=dict)

    def group(self) -> PermGroup:
        G = self.build()
        G.name = self.label
        return G


def _curated() -> dict[str, CatalogEntry]:
    E = CatalogEntry
    ents = [
        E("5T1", lambda: cyclic(5), 5, "C5"),
        E("5T2", lambda: dihedral(5), 10, "D10"),
        E("5T3", lambda: frobenius(5, 4), 20, "C5 : C4"),
        E("5T4", lambda: alternating(5), 60, "A5"),
        E("5T5", lambda: symmetric(5), 120, "S5"),
        E("6T1", lambda: cyclic(6), 6, "C6"),
        E("6T2", lambda: coset_action(dihedral(3)), 6, "S3"),
        E("6T3", lambda: product_action(dihedral(3), cyclic(2)), 12, "D12"),
        E("6T4", lambda: _pairs_action(alternating(4), "A4(6)"), 12, "A4"),
        E("7T1", lambda: cyclic(7), 7, "C7"),
        E("7T2", lambda: dihedral(7), 14, "D14"),
        E("7T3", lambda: frobenius(7, 3), 21, "C7 : C3"),
        E("7T4", lambda: frobenius(7, 6), 42, "C7 : C6"),
        E("7T5", _gl3_2, 168, "PSL(3,2)"),
        E("7T6", lambda: alternating(7), 2520, None),
        E("7T7", lambda: symmetric(7), 5040, None),
        E("8T1", lambda: cyclic(8), 8, "C8", {"galois": True}),
        E("8T2", lambda: product_action(cyclic(4), cyclic(2)), 8, "C4 x C2", {"galois": True}),
        E("8T3", lambda: product_action(product_action(cyclic(2), cyclic(2)), cyclic(2)), 8, "C2 x C2 x C2", {"galois": True}),
        E("8T4", lambda: coset_action(dihedral(4)), 8, "D8", {"galois": True}),
        E("8T5", _quaternion, 8, "Q8", {"galois": True}),
        E("8T6", lambda: dihedral(8), 16, "D16"),
        E("8T12", lambda: _sl2_3(), 24, None),
        E("8T14", lambda: coset_action(symmetric(4), _order3(symmetric(4))), 24, "S4"),
        E("9T1", lambda: cyclic(9), 9, "C9", {"sylow3_cyclic": True}),
        E("9T2", lambda: product_action(cyclic(3), cyclic(3)), 9, "C3 x C3", {"sylow3_cyclic": False, "galois": True}),
        E("9T3", lambda: dihedral(9), 18, "D18", {"sylow3_cyclic": True}),
        E("9T27", _psl2_8, 504, "PSL(2,8)", {"sylow3_cyclic": True, "simple": True}),
        E("10T1", lambda: cyclic(10), 10, "C10", {"galois": True}),
        E("10T2", lambda: coset_action(dihedral(5)), 10, "D10", {"galois": True}),
        E("10T3", lambda: dihedral(10), 20, "D20"),
        E("10T4", lambda: _sign_twist(frobenius(5, 4), "10T4"), 20, "C5 : C4"),
        E("10T5", lambda: product_action(frobenius(5, 4), cyclic(2)), 40, None),
        E("10T6", _wreath_c5_c2, 50, None),
        E("10T7", lambda: _pairs_action(alternating(5), "A5(10)"), 60, "A5"),
        E("10T8", _even_signs_c5, 80, None),
        E("10T10", lambda: _two_blocks(lambda x: (-x) % 5, "C5^2 : C4"), 100, None),
        E("10T11", lambda: product_action(alternating(5), cyclic(2)), 120, None),
        E("10T12", lambda: _sign_twist(symmetric(5), "10T12"), 120, "S5"),
        E("10T18", lambda: _two_blocks(lambda x: (2 * x) % 5, "C5^2 : C8"), 200, None),
        E("10T22", lambda: product_action(symmetric(5), cyclic(2)), 240, None),
    ]
    return {e.label: e for e in ents}


def _order3(G: PermGroup) -> PermGroup:
    i = next(i for i, x in enumerate(G.elements) if Perm(x).order() == 3)
    return G.subgroup_by_indices(G.closure([i]), gens=[i])


CURATED = _curated()


def labels() -> list[str]:
    def key(s):
        n, m = s.split("T")
        return int(n), int(m)

    return sorted(CURATED, key=key)


_FAMILY = re.compile(r"^([CDSA])\((\d+)\)$|^F\((\d+),(\d+)\)$")


def lookup(label: str) -> PermGroup:
    """Resolve a catalog or family label to a validated transitive group."""
    label = label.strip()
    if label in CURATED:
        entry = CURATED[label]
        G = entry.group()
        if G.order() != entry.order:
            raise ArithmeticError(f"{label}: order {G.order()}, expected {entry.order}")
        return G
    if "*" in label:
        left, right = label.split("*", 1)
        G = product_action(lookup(left), lookup(right), name=label)
        return G
    m = _FAMILY.match(label)
    if m is None:
        raise CatalogError(
            f"unknown label {label!r}; supply the group as JSON "
            '{"degree": n, "generators": [...]} instead'
        )
    if m.group(1):
        kind, n = m.group(1), int(m.group(2))
        if n < 1:
            raise CatalogError(f"bad degree in {label!r}")
        G = {"C": cyclic, "D": dihedral, "S": symmetric, "A": alternating}[kind](n)
    else:
        G = frobenius(int(m.group(3)), int(m.group(4)))
    G.name = label
    return G


def self_test(labels_: Optional[Sequence[str]] = None) -> dict[str, list[str]]:
    """Re-check order, transitivity and recorded facts; returns failures per label."""
    out: dict[str, list[str]] = {}
    for label in labels_ or labels():
        e = CURATED[label]
        G = e.group()
        bad = []
        if G.order() != e.order:
            bad.append(f"order {G.order()} != {e.order}")
        if not is_transitive(G):
            bad.append("not transitive")
        if G.degree != int(label.split("T")[0]):
            bad.append("wrong degree")
        if e.structure and G.is_enumerable() and structure_name(G) != e.structure:
            bad.append(f"structure {structure_name(G)} != {e.structure}")
        if e.facts.get("galois") is not None and (G.order() == G.degree) != e.facts["galois"]:
            bad.append("regularity")
        if "sylow3_cyclic" in e.facts:
            P = sylow(G, 3)
            if all_sylow_cyclic(P) != e.facts["sylow3_cyclic"]:
                bad.append("3-Sylow cyclicity")
        if e.facts.get("simple"):
            t = subgroup_classes(G)
            if any(1 < K.order() < G.order() and is_normal(G, K) for K in t.representatives):
                bad.append("not simple")
        if bad:
            out[label] = bad
    return out

"""Finite permutation groups at desk scale.

Points are 0-based internally and 1-based at the user boundary.  Products
compose left to right: ``p * q`` applies ``p`` first, so groups act on the
right, ``x^(pq) = (x^p)^q``.  Groups are explored by listing their elements;
an ``order_cap`` guards against accidentally enumerating huge groups, and the
full symmetric and alternating groups are recognised without enumeration.
"""
from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from math import factorial, gcd
from typing import Iterable, Optional, Sequence

import numpy as np
from sympy import factorint, isprime

__all__ = [
    "Perm",
    "PermGroup",
    "SubgroupClassTable",
    "CosetTable",
    "CapError",
    "DEFAULT_ORDER_CAP",
    "group_from_generators",
    "subgroup_classes",
    "cosets",
    "sylow",
    "is_transitive",
    "is_cyclic",
    "is_abelian",
    "is_nilpotent",
    "all_sylow_cyclic",
    "point_stabilizer",
    "normal_core",
    "orbit_count",
    "metacyclic_form",
    "odd_cr_c2_form",
    "structure_name",
]

DEFAULT_ORDER_CAP = 1000


class CapError(RuntimeError):
    """Raised when a computation would exceed a configured size cap."""


# ---------------------------------------------------------------------------
# permutations

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Perm:
    """A permutation of ``{1..degree}`` (stored 0-based)."""

    __slots__ = ("img",)

    def __init__(self, images0: Sequence[int]):
        img = tuple(int(x) for x in images0)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a permutation: {[x + 1 for x in img]}")
        self.img = img

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @classmethod
    def from_images(cls, images: Sequence[int]) -> "Perm":
        """From 1-based images ``[1^p, 2^p, ...]``."""
        return cls([int(x) - 1 for x in images])

    @classmethod
    def from_cycles(cls, cycles, degree: int) -> "Perm":
        """From cycle notation, either a string like ``"(1,2,3)(4 5)"`` or a
        list of 1-based cycles."""
        if isinstance(cycles, str):
            text = cycles.strip()
            if text in ("", "()"):
                cycles = []
            else:
                if _CYCLE_RE.sub("", text).strip():
                    raise ValueError(f"malformed cycle string {cycles!r}")
                cycles = [
                    [int(t) for t in re.split(r"[,\s]+", body.strip()) if t]
                    for body in _CYCLE_RE.findall(text)
                ]
        img = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            pts = [int(x) - 1 for x in cyc]
            for x in pts:
                if not 0 <= x < degree or x in seen:
                    raise ValueError(f"bad cycle {list(cyc)} for degree {degree}")
                seen.add(x)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                img[a] = b
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self.img)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(x + 1 for x in self.img)

    def __call__(self, point: int) -> int:
        return self.img[point - 1] + 1

    def __mul__(self, other: "Perm") -> "Perm":
        q = other.img
        return Perm(tuple(q[x] for x in self.img))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.img)
        for i, x in enumerate(self.img):
            inv[x] = i
        return Perm(inv)

    __invert__ = inverse

    def __pow__(self, k: int) -> "Perm":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = Perm.identity(self.degree)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.img == other.img

    def __hash__(self) -> int:
        return hash(self.img)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.img))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 1-based, each starting at its smallest point."""
        seen = [False] * len(self.img)
        out = []
        for i in range(len(self.img)):
            if seen[i]:
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j + 1)
                j = self.img[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        o = 1
        for c in self.cycles():
            o = o * len(c) // gcd(o, len(c))
        return o

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def __str__(self) -> str:
        cyc = self.cycles()
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc) or "()"

    def __repr__(self) -> str:
        return f"Perm({self})"


def _compose(p: tuple, q: tuple) -> tuple:
    return tuple(q[x] for x in p)


def _inverse(p: tuple) -> tuple:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def _perm_order(p: tuple) -> int:
    return Perm(p).order()


# ---------------------------------------------------------------------------
# groups


class PermGroup:
    """A permutation group given by generators.

    Elements are enumerated lazily (breadth first from the identity, each
    element recording the parent and generator that produced it) and kept as
    0-based image tuples.  Subgroups created through :meth:`subgroup_by_indices`
    remember their ambient group so that their elements can be mapped back.
    """

    def __init__(
        self,
        degree: int,
        gens: Iterable = (),
        order_cap: int = DEFAULT_ORDER_CAP,
        *,
        name: Optional[str] = None,
    ):
        self.degree = int(degree)
        perms = []
        for g in gens:
            if not isinstance(g, Perm):
                g = Perm(g)
            if g.degree != self.degree:
                raise ValueError(f"generator {g} has degree {g.degree}, expected {self.degree}")
            perms.append(g)
        self.gens: tuple[Perm, ...] = tuple(perms)
        self.order_cap = order_cap
        self.name = name
        self._lock = threading.Lock()
        self._elements: Optional[list[tuple]] = None
        self._index: Optional[dict] = None
        self._parent: Optional[list[int]] = None
        self._via: Optional[list[int]] = None
        self._table: Optional[np.ndarray] = None
        self._inv: Optional[np.ndarray] = None
        self._conj: Optional[np.ndarray] = None
        self._giant: Optional[str] = None
        self._giant_checked = False
        self.ambient: Optional["PermGroup"] = None
        self.ambient_indices: Optional[frozenset] = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_cycles(cls, degree: int, gens: Iterable[str], **kw) -> "PermGroup":
        return cls(degree, [Perm.from_cycles(g, degree) for g in gens], **kw)

    def __repr__(self) -> str:
        label = self.name or f"degree {self.degree}"
        return f"<PermGroup {label} with {len(self.gens)} generators>"

    # -- enumeration -----------------------------------------------------------

    def _enumerate(self, cap: Optional[int] = None) -> None:
        if self._elements is not None:
            return
        cap = self.order_cap if cap is None else cap
        with self._lock:
            if self._elements is not None:
                return
            ident = tuple(range(self.degree))
            elements = [ident]
            index = {ident: 0}
            parent = [-1]
            via = [-1]
            gens = [g.img for g in self.gens]
            i = 0
            while i < len(elements):
                x = elements[i]
                for k, g in enumerate(gens):
                    y = _compose(x, g)
                    if y not in index:
                        index[y] = len(elements)
                        elements.append(y)
                        parent.append(i)
                        via.append(k)
                        if len(elements) > cap:
                            raise CapError(
                                f"group order exceeds the cap of {cap}; raise order_cap to enumerate"
                            )
                i += 1
            self._index = index
            self._parent = parent
            self._via = via
            self._elements = elements

    @property
    def elements(self) -> list[tuple]:
        self._enumerate()
        return self._elements

    def element(self, i: int) -> Perm:
        return Perm(self.elements[i])

    def index_of(self, g) -> int:
        self._enumerate()
        key = g.img if isinstance(g, Perm) else tuple(g)
        return self._index[key]

    def contains(self, g) -> bool:
        key = g.img if isinstance(g, Perm) else tuple(g)
        if self._elements is None and self.giant_type() is not None:
            return self._giant == "S" or Perm(key).sign() == 1
        self._enumerate()
        return key in self._index

    def word_data(self) -> tuple[list[int], list[int]]:
        """``(parent, generator)`` per element: element i = parent[i] * gens[generator[i]]."""
        self._enumerate()
        return self._parent, self._via

    def order(self) -> int:
        if self._elements is None:
            kind = self.giant_type()
            if kind is not None:
                n = factorial(self.degree)
                return n if kind == "S" else n // 2
        return len(self.elements)

    def is_enumerable(self) -> bool:
        try:
            self._enumerate()
        except CapError:
            return False
        return True

    def identity_index(self) -> int:
        return 0

    # -- tables ------------------------------------------------------------------

    def _codes(self, arr: np.ndarray) -> np.ndarray:
        n = self.degree
        if n ** n < 2**62:
            w = n ** np.arange(n, dtype=np.int64)
            return arr.astype(np.int64) @ w
        # fall back to a stable row hash through structured view
        return np.array([hash(r.tobytes()) for r in arr], dtype=np.int64)

    def mult_table(self) -> np.ndarray:
        """``T[i, j]`` = index of ``elements[i] * elements[j]``."""
        if self._table is None:
            E = np.array(self.elements, dtype=np.int64).reshape(len(self.elements), self.degree)
            codes = self._codes(E)
            order = np.argsort(codes)
            sorted_codes = codes[order]
            N = len(E)
            T = np.empty((N, N), dtype=np.int32)
            for j in range(N):
                prod = E[j][E]  # rows: elements[i] * elements[j]
                pos = np.searchsorted(sorted_codes, self._codes(prod))
                T[:, j] = order[pos]
            self._table = T
            self._inv = np.argmin(T, axis=1).astype(np.int32)
        return self._table

    def inverse_indices(self) -> np.ndarray:
        self.mult_table()
        return self._inv

    def conj_table(self) -> np.ndarray:
        """``C[g, k]`` = index of ``g^-1 * k * g``."""
        if self._conj is None:
            T = self.mult_table()
            inv = self._inv
            left = T[inv]  # left[g, k] = g^-1 * k
            N = T.shape[0]
            self._conj = T[left, np.arange(N)[:, None]]
        return self._conj

    def generator_indices(self) -> list[int]:
        return [self.index_of(g) for g in self.gens]

    def closure(self, gen_indices: Iterable[int]) -> frozenset:
        """Element indices of the subgroup generated by the given elements."""
        T = self.mult_table()
        gi = np.array(sorted(set(int(x) for x in gen_indices)), dtype=np.int64)
        members = np.zeros(T.shape[0], dtype=bool)
        members[0] = True
        if gi.size == 0:
            return frozenset([0])
        frontier = np.array([0])
        while frontier.size:
            nxt = np.unique(T[frontier][:, gi].ravel())
            nxt = nxt[~members[nxt]]
            members[nxt] = True
            frontier = nxt
        return frozenset(int(i) for i in np.nonzero(members)[0])

    def subgroup_by_indices(self, indices: Iterable[int], gens: Optional[Sequence[int]] = None) -> "PermGroup":
        """The subgroup on the given element indices, as a group in its own right."""
        idx = frozenset(indices)
        if gens is None:
            gens = _small_generating_set(self, idx)
        H = PermGroup(self.degree, [Perm(self.elements[i]) for i in gens], self.order_cap)
        H.ambient = self
        H.ambient_indices = idx
        return H

    def indices_in(self, G: "PermGroup") -> frozenset:
        """Element indices of ``self`` inside the enumeration of ``G``."""
        if self.ambient is G and self.ambient_indices is not None:
            return self.ambient_indices
        try:
            return frozenset(G._index[x] for x in self.elements)
        except KeyError:
            raise ValueError("not a subgroup of the given group") from None

    def is_subgroup_of(self, G: "PermGroup") -> bool:
        if self.degree != G.degree:
            return False
        return all(G.contains(g) for g in self.gens)

    # -- giant recognition -------------------------------------------------------

    def orbits(self) -> list[list[int]]:
        """Orbits on 0-based points."""
        seen = [False] * self.degree
        out = []
        for s in range(self.degree):
            if seen[s]:
                continue
            orb = [s]
            seen[s] = True
            for x in orb:
                for g in self.gens:
                    y = g.img[x]
                    if not seen[y]:
                        seen[y] = True
                        orb.append(y)
            out.append(orb)
        return out

    def _minimal_block(self, b: int) -> list[int]:
        parent = list(range(self.degree))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        queue = [(0, b)]
        parent[find(b)] = find(0)
        while queue:
            x, y = queue.pop()
            for g in self.gens:
                u, v = find(g.img[x]), find(g.img[y])
                if u != v:
                    parent[v] = u
                    queue.append((g.img[x], g.img[y]))
        root = find(0)
        return [x for x in range(self.degree) if find(x) == root]

    def is_primitive(self) -> bool:
        if len(self.orbits()) != 1:
            return False
        return all(len(self._minimal_block(b)) == self.degree for b in range(1, self.degree))

    def giant_type(self) -> Optional[str]:
        """``"S"`` or ``"A"`` when the group is the full symmetric or
        alternating group on its points (recognised through a short cycle in
        a primitive group), else None."""
        if self._giant_checked:
            return self._giant
        self._giant_checked = True
        n = self.degree
        even = all(g.sign() == 1 for g in self.gens)
        if n <= 2 or not self.is_primitive():
            return None
        found = False
        # short words in the generators and their powers
        ident = tuple(range(n))
        seen = {ident}
        layer = [ident]
        budget = 3000
        while layer and not found and len(seen) < budget:
            nxt = []
            for x in layer:
                for g in self.gens:
                    y = _compose(x, g.img)
                    if y in seen:
                        continue
                    seen.add(y)
                    nxt.append(y)
                    if _has_short_cycle_power(y):
                        found = True
                        break
                if found:
                    break
            layer = nxt
        if found:
            self._giant = "A" if even else "S"
        return self._giant


def _has_short_cycle_power(p: tuple) -> bool:
    """True if some power of ``p`` is a 3-cycle or a transposition."""
    x = Perm(p)
    o = x.order()
    for k in (2, 3):
        if o % k == 0 and [len(c) for c in (x ** (o // k)).cycles()] == [k]:
            return True
    return False


def _small_generating_set(G: PermGroup, idx: frozenset) -> list[int]:
    """Greedy generating set for the subgroup with element indices ``idx``."""
    gens: list[int] = []
    span = frozenset([0])
    # prefer elements of large order so that few generators are needed
    order_of = _element_orders(G)
    for i in sorted(idx, key=lambda i: (-order_of[i], i)):
        if i in span:
            continue
        gens.append(i)
        span = G.closure(gens)
        if len(span) == len(idx):
            break
    return gens


def _element_orders(G: PermGroup) -> list[int]:
    cache = getattr(G, "_orders", None)
    if cache is None:
        cache = [_perm_order(x) for x in G.elements]
        G._orders = cache
    return cache


def group_from_generators(degree: int, gens: Iterable, order_cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """Group generated by permutations given as :class:`Perm`, 1-based image
    lists, or cycle strings."""
    perms = []
    for g in gens:
        if isinstance(g, Perm):
            perms.append(g)
        elif isinstance(g, str):
            perms.append(Perm.from_cycles(g, degree))
        else:
            perms.append(Perm.from_images(g))
    return PermGroup(degree, perms, order_cap)


# ---------------------------------------------------------------------------
# subgroup classes


@dataclass
class SubgroupClassTable:
    """Conjugacy classes of subgroups, ordered by subgroup order."""

    group: PermGroup
    representatives: list[PermGroup]
    class_sizes: list[int]
    index_sets: list[frozenset] = field(repr=False)

    def __len__(self) -> int:
        return len(self.representatives)

    @property
    def orders(self) -> list[int]:
        return [len(s) for s in self.index_sets]

    def names(self) -> list[str]:
        return [structure_name(H) for H in self.representatives]

    def total_subgroups(self) -> int:
        return sum(self.class_sizes)

    def transitive_classes(self) -> list[int]:
        return [i for i, H in enumerate(self.representatives) if is_transitive(H)]

    def class_of(self, H: PermGroup) -> int:
        """Index of the class containing the subgroup ``H``."""
        G = self.group
        target = H.indices_in(G)
        C = G.conj_table()
        for i, s in enumerate(self.index_sets):
            if len(s) != len(target):
                continue
            arr = np.array(sorted(s))
            for g in range(C.shape[0]):
                if frozenset(C[g, arr].tolist()) == target:
                    return i
        raise ValueError("subgroup not found in the class table")

    def is_subconjugate(self, i: int, j: int) -> bool:
        """True iff class ``i`` has a member inside representative ``j``."""
        a, b = self.index_sets[i], self.index_sets[j]
        if len(b) % len(a):
            return False
        C = self.group.conj_table()
        arr = np.array(sorted(a))
        return any(b.issuperset(C[g, arr].tolist()) for g in range(C.shape[0]))


def _conjugates(G: PermGroup, s: frozenset) -> set:
    C = G.conj_table()
    arr = np.array(sorted(s), dtype=np.int64)
    rows = np.sort(C[:, arr], axis=1)
    rows = np.unique(rows, axis=0)
    return {frozenset(r.tolist()) for r in rows}


def _prime_power_cyclics(G: PermGroup) -> list[tuple[frozenset, int]]:
    orders = _element_orders(G)
    out = {}
    for i, o in enumerate(orders):
        if o > 1 and len(factorint(o)) == 1:
            c = G.closure([i])
            if c not in out:
                out[c] = i
    return sorted(((c, i) for c, i in out.items()), key=lambda t: (len(t[0]), t[1]))


def subgroup_classes(G: PermGroup, order_cap: Optional[int] = None) -> SubgroupClassTable:
    """All conjugacy classes of subgroups of ``G``.

    Every subgroup is generated by its cyclic subgroups of prime-power order,
    so joining class representatives with such cyclic subgroups reaches every
    class; conjugates are registered to avoid duplicates.
    """
    cache = getattr(G, "_classes", None)
    if cache is not None:
        return cache
    cap = G.order_cap if order_cap is None else order_cap
    if G.order() > cap:
        raise CapError(f"|G| = {G.order()} exceeds the subgroup-class cap of {cap}")
    G._enumerate(cap)
    cyclics = _prime_power_cyclics(G)
    trivial = frozenset([0])
    reps: list[tuple[frozenset, list[int]]] = [(trivial, [])]
    sizes = [1]
    known = {trivial: 0}
    queue = [0]
    while queue:
        i = queue.pop(0)
        K, gk = reps[i]
        for C, x in cyclics:
            if x in K:
                continue
            J = G.closure(gk + [x])
            if J in known:
                continue
            conj = _conjugates(G, J)
            cid = len(reps)
            for c in conj:
                known[c] = cid
            reps.append((J, gk + [x]))
            sizes.append(len(conj))
            queue.append(cid)
    order = sorted(range(len(reps)), key=lambda i: (len(reps[i][0]), i))
    table = SubgroupClassTable(
        group=G,
        representatives=[G.subgroup_by_indices(reps[i][0]) for i in order],
        class_sizes=[sizes[i] for i in order],
        index_sets=[reps[i][0] for i in order],
    )
    G._classes = table
    return table


# ---------------------------------------------------------------------------
# cosets


@dataclass
class CosetTable:
    """Right cosets ``H x`` of a subgroup, with ``G`` acting by right
    multiplication (which matches the right action on points)."""

    group: PermGroup
    subgroup: PermGroup
    representatives: list[Perm]
    generator_action: list[Perm]
    coset_of: list[int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.representatives)

    def action_of(self, g) -> Perm:
        """Permutation of coset indices induced by an element of the group."""
        G = self.group
        gi = G.index_of(g)
        T = G.mult_table()
        return Perm([self.coset_of[T[G.index_of(r), gi]] for r in self.representatives])


def cosets(G: PermGroup, H: PermGroup) -> CosetTable:
    """Coset table of ``H`` in ``G``; representatives in enumeration order,
    identity first."""
    if not H.is_subgroup_of(G):
        raise ValueError("H is not a subgroup of G")
    T = G.mult_table()
    hidx = sorted(H.indices_in(G))
    N = T.shape[0]
    coset_of = [-1] * N
    reps: list[int] = []
    for g in range(N):
        if coset_of[g] >= 0:
            continue
        cid = len(reps)
        reps.append(g)
        for h in hidx:
            coset_of[int(T[h, g])] = cid
    gen_action = []
    for gi in G.generator_indices():
        gen_action.append(Perm([coset_of[int(T[r, gi])] for r in reps]))
    return CosetTable(
        group=G,
        subgroup=H,
        representatives=[G.element(r) for r in reps],
        generator_action=gen_action,
        coset_of=coset_of,
    )


def orbit_count(H: PermGroup, table: CosetTable) -> int:
    """Number of ``H``-orbits on the cosets of ``table``."""
    G = table.group
    if not H.is_subgroup_of(G):
        raise ValueError("H is not a subgroup of the coset table's group")
    n = len(table)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    T = G.mult_table()
    rep_idx = [G.index_of(r) for r in table.representatives]
    for h in H.gens:
        hi = G.index_of(h)
        for c, r in enumerate(rep_idx):
            d = table.coset_of[int(T[r, hi])]
            a, b = find(c), find(d)
            if a != b:
                parent[a] = b
    return sum(1 for x in range(n) if find(x) == x)


# ---------------------------------------------------------------------------
# predicates and special subgroups


def is_transitive(G: PermGroup) -> bool:
    return len(G.orbits()) == 1


def is_abelian(G: PermGroup) -> bool:
    return all(a * b == b * a for a in G.gens for b in G.gens)


def is_cyclic(G: PermGroup) -> bool:
    if G.giant_type() is not None and G._elements is None:
        return False
    n = G.order()
    if not is_abelian(G):
        return False
    return any(o == n for o in _element_orders(G))


def point_stabilizer(G: PermGroup, point: int = 1) -> PermGroup:
    """Stabilizer of a 1-based point."""
    x = point - 1
    idx = [i for i, e in enumerate(G.elements) if e[x] == x]
    return G.subgroup_by_indices(idx)


def _conjugation_closed(G: PermGroup, idx: frozenset) -> bool:
    C = G.conj_table()
    arr = np.array(sorted(idx))
    for gi in G.generator_indices():
        if not idx.issuperset(C[gi, arr].tolist()):
            return False
    return True


def is_normal(G: PermGroup, H: PermGroup) -> bool:
    return _conjugation_closed(G, H.indices_in(G))


def normal_core(G: PermGroup, H: PermGroup) -> PermGroup:
    C = G.conj_table()
    arr = np.array(sorted(H.indices_in(G)))
    core = set(arr.tolist())
    for g in range(C.shape[0]):
        core &= set(C[g, arr].tolist())
    return G.subgroup_by_indices(core)


def _p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def sylow(G: PermGroup, p: int) -> PermGroup:
    """A Sylow ``p``-subgroup, grown greedily from p-elements."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    target = _p_part(G.order(), p)
    orders = _element_orders(G)
    gens: list[int] = []
    P = frozenset([0])
    while len(P) < target:
        grown = False
        for i, o in enumerate(orders):
            if i in P or _p_part(o, p) != o:
                continue
            J = G.closure(gens + [i])
            if _p_part(len(J), p) == len(J):
                gens.append(i)
                P = J
                grown = True
                if len(P) == target:
                    break
        if not grown:
            raise AssertionError("Sylow growth stalled")
    return G.subgroup_by_indices(P, gens if gens else [])


def _sylow_primes(G: PermGroup) -> list[int]:
    return sorted(factorint(G.order()).keys())


def is_nilpotent(G: PermGroup) -> bool:
    """Nilpotent iff every Sylow subgroup is normal."""
    if G._elements is None and G.giant_type() is not None:
        return G.degree <= 2
    return all(is_normal(G, sylow(G, p)) for p in _sylow_primes(G))


def all_sylow_cyclic(G: PermGroup) -> bool:
    if G._elements is None and G.giant_type() is not None:
        # S_n, A_n with n >= 4 contain a Klein four-group
        return G.degree <= 3
    return all(is_cyclic(sylow(G, p)) for p in _sylow_primes(G))


def _power_index(G: PermGroup, s: int, x: int) -> Optional[int]:
    """``r`` with ``elements[s]^r == elements[x]``, or None."""
    T = G.mult_table()
    cur = 0
    r = 0
    while True:
        if cur == x:
            return r
        cur = int(T[cur, s])
        r += 1
        if cur == 0:
            return None


def metacyclic_form(G: PermGroup) -> Optional[tuple[int, int, int]]:
    """``(m, d, r)`` with ``G = <s, t | s^m = t^(2^d) = 1, t s t^-1 = s^r>``,
    ``m`` odd, ``<s>`` normal and ``r^2 = 1 mod m``; None if no such form."""
    n = G.order()
    two = _p_part(n, 2)
    m = n // two
    d = two.bit_length() - 1
    orders = _element_orders(G)
    T = G.mult_table()
    inv = G.inverse_indices()
    ts = [i for i, o in enumerate(orders) if o == two]
    if not ts:
        return None
    if m == 1:
        return (1, d, 1)
    for s in (i for i, o in enumerate(orders) if o == m):
        S = G.closure([s])
        if not _conjugation_closed(G, S):
            continue
        for t in ts:
            x = int(T[T[t, s], inv[t]])
            r = _power_index(G, s, x)
            if r is not None and (r * r - 1) % m == 0:
                return (m, d, r)
    return None


def odd_cr_c2_form(G: PermGroup, H: PermGroup) -> bool:
    """True iff ``|H| = 2`` and ``G = C_r x| H`` with ``r >= 3`` odd and ``H``
    acting nontrivially on the normal cyclic factor."""
    if H.order() != 2 or G.order() % 2:
        return False
    r = G.order() // 2
    if r < 3 or r % 2 == 0:
        return False
    h = next(i for i in H.indices_in(G) if i != 0)
    T = G.mult_table()
    for s, o in enumerate(_element_orders(G)):
        if o != r:
            continue
        if not _conjugation_closed(G, G.closure([s])):
            continue
        return int(T[s, h]) != int(T[h, s])
    return False


# ---------------------------------------------------------------------------
# names


def _abelian_invariants(G: PermGroup) -> list[int]:
    """Invariant factors of an abelian group from its element orders."""
    orders = _element_orders(G)
    n = len(orders)
    primary: list[int] = []
    for p in factorint(n):
        # count elements of order dividing p^k
        counts = {}
        k = 0
        while True:
            cnt = sum(1 for o in orders if _p_part(o, p) == o and (p**k) % o == 0)
            counts[k] = cnt
            if cnt == _p_part(n, p):
                break
            k += 1
        # number of cyclic factors of order >= p^j is log_p(c_j / c_{j-1})
        ge = []
        for j in range(1, k + 1):
            ratio = counts[j] // counts[j - 1]
            ge.append(round(np.log(ratio) / np.log(p)))
        for j in range(1, k + 1):
            exact = ge[j - 1] - (ge[j] if j < k else 0)
            primary += [p**j] * exact
    # combine into invariant factors
    by_p: dict[int, list[int]] = {}
    for q in primary:
        by_p.setdefault(list(factorint(q))[0], []).append(q)
    for v in by_p.values():
        v.sort(reverse=True)
    width = max((len(v) for v in by_p.values()), default=0)
    inv = []
    for i in range(width):
        f = 1
        for v in by_p.values():
            if i < len(v):
                f *= v[i]
        inv.append(f)
    return inv


def structure_name(G: PermGroup) -> str:
    """A short structure label such as ``C2 x C2`` or ``D10``."""
    if G._elements is None and G.giant_type() is not None:
        return f"{G.giant_type()}{G.degree}"
    n = G.order()
    if n == 1:
        return "1"
    orders = _element_orders(G)
    if is_abelian(G):
        return " x ".join(f"C{k}" for k in _abelian_invariants(G))
    hist = {o: orders.count(o) for o in set(orders)}
    half = n // 2
    if n % 2 == 0 and hist.get(half, 0) and hist.get(2, 0) >= half:
        return "S3" if n == 6 else f"D{n}"
    if n == 8 and hist.get(4, 0) == 6:
        return "Q8"
    if n == 12 and set(hist) == {1, 2, 3}:
        return "A4"
    if n == 24 and set(hist) == {1, 2, 3, 4} and hist[2] == 9:
        return "S4"
    if n == 60 and hist.get(5, 0) == 24:
        return "A5"
    if n == 120 and hist.get(5, 0) == 24 and hist.get(2, 0) == 25:
        return "S5"
    if n == 168 and hist.get(7, 0) == 48:
        return "PSL(3,2)"
    if n == 504 and hist.get(7, 0) == 216 and hist.get(9, 0) == 168:
        return "PSL(2,8)"
    for p in factorint(n):
        if n % (p * p) and n // p < p and hist.get(p, 0) == p - 1:
            # normal Sylow p with a cyclic complement acting faithfully
            k = n // p
            if hist.get(k, 0) == p * _phi(k):
                return f"C{p} : C{k}"
    return f"group of order {n}"


def _phi(n: int) -> int:
    out = n
    for p in factorint(n):
        out = out // p * (p - 1)
    return out

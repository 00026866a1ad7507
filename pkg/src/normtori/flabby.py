"""Flabby resolutions ``0 -> M -> P -> F -> 0``.

The construction works on the dual side.  A *base* for a lattice ``N`` is a
finite ``G``-stable set ``S`` of vectors of ``N``; it gives the permutation
lattice ``Z[S]`` and the map ``e_s -> s``.  When the ``U``-orbit sums of ``S``
generate ``N^U`` for every subgroup ``U`` the kernel ``C`` is coflabby.
Resolving ``N = M°`` and dualising gives ``0 -> M -> Z[S] -> C° -> 0`` with
``F = C°`` flabby.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from sympy import factorint

from .glattice import GLattice, GMap, as_array, dual, fixed_sublattice, matmul
from .intlat import (
    LARGE_PRIME,
    IntMatrix,
    coordinates,
    det,
    independent_rows,
    left_kernel_z,
    rank_mod_p,
    right_inverse,
    rref_mod_p,
    spans_lattice,
)
from .permgrp import Perm, SubgroupClassTable

__all__ = [
    "Base",
    "CoflabbySurjection",
    "FlabbyResolution",
    "FlabbyClassRep",
    "naive_base",
    "minimize_base",
    "coflabby_surjection",
    "flabby_resolution",
    "flabby_class",
]


@dataclass(frozen=True)
class Base:
    """A ``G``-stable set of lattice vectors, stored as whole orbits."""

    orbits: tuple  # tuple of tuples of vectors (tuples of ints)

    @property
    def rank(self) -> int:
        return sum(len(o) for o in self.orbits)

    def vectors(self) -> list[tuple]:
        return [v for o in self.orbits for v in o]


def _vec_orbit(N: GLattice, v: tuple) -> tuple:
    seen = {v: None}
    out = [v]
    for x in out:
        row = np.array([x], dtype=object if N.gen_matrices and N.gen_matrices[0].dtype == object else np.int64)
        for A in N.gen_matrices:
            y = tuple(int(t) for t in matmul(row, A)[0])
            if y not in seen:
                seen[y] = None
                out.append(y)
    return tuple(out)


def naive_base(N: GLattice, table: SubgroupClassTable) -> Base:
    """``G``-orbits of the fixed-sublattice bases of all class representatives."""
    orbits: list[tuple] = []
    covered: set = set()
    for U in table.representatives:
        for b in fixed_sublattice(N, U):
            v = tuple(int(x) for x in b)
            if v in covered:
                continue
            orb = _vec_orbit(N, v)
            covered.update(orb)
            orbits.append(orb)
    return Base(tuple(orbits))


def _standard_base(N: GLattice) -> Optional[Base]:
    """Orbits of the standard basis when every generator permutes it."""
    for A in N.gen_matrices:
        if not (((A == 0) | (A == 1)).all() and (A.sum(axis=0) == 1).all() and (A.sum(axis=1) == 1).all()):
            return None
    if N.rank == 0:
        return None
    orbits, covered = [], set()
    for i in range(N.rank):
        v = tuple(int(i == j) for j in range(N.rank))
        if v not in covered:
            orb = _vec_orbit(N, v)
            covered.update(orb)
            orbits.append(orb)
    return Base(tuple(orbits))


class _SurjectivityChecker:
    """Decides ``U``-fixed-point surjectivity for sub-collections of orbits.

    Once ``Z[S] -> N`` is onto, ``|U| m = pi(norm_U x)`` for ``m`` in ``N^U``
    and any preimage ``x``, so the cokernel on ``U``-fixed points is killed
    by ``|U|``; it then suffices to check the rank modulo primes of ``|U|``.
    """

    def __init__(self, N: GLattice, table: SubgroupClassTable, orbits: Sequence[tuple]):
        self.N = N
        self.fixed = []
        self.primes = []
        self.sums = []  # per U: per orbit: list of coordinate vectors
        for U in table.representatives:
            fb = fixed_sublattice(N, U)
            mats = [N.matrix(u) for u in U.gens]
            # U-orbit sums are U-fixed, so a right inverse of the saturated
            # fixed basis turns them into coordinates
            R = as_array(right_inverse(fb)) if fb else None
            per_orbit = []
            for orb in orbits:
                if R is None:
                    per_orbit.append(None)
                    continue
                sums = as_array(np.array(_u_orbit_sums(orb, mats), dtype=object))
                per_orbit.append(_as_int64(matmul(sums, R), len(fb)))
            self.fixed.append(len(fb))
            self.primes.append(sorted(factorint(U.order())))
            self.sums.append(per_orbit)
        # the trivial subgroup first: it carries surjectivity itself
        self.order = sorted(range(len(self.fixed)), key=lambda i: (len(self.primes[i]) > 0, i))

    def ok(self, keep: Sequence[int]) -> bool:
        for i in self.order:
            dim, per_orbit = self.fixed[i], self.sums[i]
            if dim == 0:
                continue
            vecs = np.vstack([per_orbit[j] for j in keep])
            if vecs.shape[0] < dim:
                return False
            if not self.primes[i]:
                if not spans_lattice(vecs, dim):
                    return False
            elif any(rank_mod_p(vecs, p) < dim for p in self.primes[i]):
                return False
        return True


    def grow(self, order: Sequence[int]) -> list[int]:
        """Add orbits in ``order`` that raise some fixed-point rank modulo a
        relevant prime, then keep adding until the collection is surjective.

        For the trivial subgroup the relevant primes are found on the way:
        those dividing the index of the lattice spanned so far.
        """
        extra: dict[int, list[int]] = {}
        while True:
            keep = self._grow_ranks(order, extra)
            if self.ok(keep):
                return keep
            new = False
            for i, dim in enumerate(self.fixed):
                if not dim or self.primes[i]:
                    continue
                vecs = np.vstack([self.sums[i][j] for j in keep]) if keep else np.zeros((0, dim), dtype=np.int64)
                for p in _index_primes(vecs, dim):
                    if p not in extra.setdefault(i, []):
                        extra[i].append(p)
                        new = True
            if not new:
                break
        for j in order:
            if j not in keep:
                keep.append(j)
                if self.ok(keep):
                    return keep
        return keep

    def _grow_ranks(self, order: Sequence[int], extra: dict) -> list[int]:
        state = {}
        for i, dim in enumerate(self.fixed):
            if dim:
                for p in (self.primes[i] or [LARGE_PRIME]) + extra.get(i, []):
                    state[i, p] = np.zeros((0, dim), dtype=np.int64)
        keep: list[int] = []
        for j in order:
            gained = False
            for (i, p), basis in state.items():
                if basis.shape[0] == self.fixed[i]:
                    continue
                R, pivots, _ = rref_mod_p(np.vstack([basis, self.sums[i][j]]), p)
                if len(pivots) > basis.shape[0]:
                    state[i, p] = R[: len(pivots)]
                    gained = True
            if gained:
                keep.append(j)
        return keep


def _index_primes(vecs: np.ndarray, dim: int) -> list[int]:
    """Primes dividing the index of the span of ``vecs`` (full rank assumed)."""
    idx = independent_rows(vecs)
    if len(idx) < dim:
        return []
    return sorted(factorint(abs(det(vecs[idx].tolist()))))


def _as_int64(rows, dim: int) -> np.ndarray:
    arr = as_array(np.asarray(rows).reshape(len(rows), dim))
    if arr.dtype != np.int64:
        raise OverflowError("orbit sums too large for int64")
    return arr


def _u_orbit_sums(orb: tuple, mats: Sequence[np.ndarray]) -> list[list[int]]:
    pos = {v: i for i, v in enumerate(orb)}
    n = len(orb)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    if mats:
        V = as_array(np.array(orb, dtype=object))
        for A in mats:
            img = matmul(V, A).tolist()
            for i, w in enumerate(img):
                a, b = find(i), find(pos[tuple(int(t) for t in w)])
                if a != b:
                    parent[a] = b
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    sums = []
    for members in groups.values():
        s = [0] * len(orb[0])
        for i in members:
            s = [a + b for a, b in zip(s, orb[i])]
        sums.append(s)
    return sums


def minimize_base(
    N: GLattice,
    table: SubgroupClassTable,
    base: Optional[Base] = None,
    restarts: int = 0,
    seed: int = 0,
) -> list[Base]:
    """Greedy search for small fixed-point surjective sub-bases.

    Each pass adds whole orbits until the collection is fixed-point
    surjective and then drops every orbit that is not needed.  The first pass
    adds small orbits first and drops large ones first; each restart uses a
    seeded random order for both phases.  Candidates come back sorted by rank
    (then discovery order).
    """
    base = base or naive_base(N, table)
    orbits = list(base.orbits)
    checker = _SurjectivityChecker(N, table, orbits)
    if not checker.ok(range(len(orbits))):
        raise ArithmeticError("base is not fixed-point surjective")
    rng = random.Random(seed)
    by_size = sorted(range(len(orbits)), key=lambda i: (len(orbits[i]), i))
    orders = [(by_size, by_size[::-1])]
    for _ in range(restarts):
        perm = list(range(len(orbits)))
        rng.shuffle(perm)
        orders.append((perm, perm))
    seen = set()
    found = []
    standard = _standard_base(N)
    if standard is not None:
        # a permuted basis is already an isomorphism Z[S] -> N
        found.append(standard)
    for grow, shrink in orders:
        keep = checker.grow(grow)
        for i in shrink:
            if i not in keep:
                continue
            trial = [j for j in keep if j != i]
            if trial and checker.ok(trial):
                keep = trial
        key = tuple(sorted(keep))
        if key not in seen:
            seen.add(key)
            found.append(Base(tuple(orbits[j] for j in key)))
    return sorted(found, key=lambda b: b.rank)


# ---------------------------------------------------------------------------
# surjections and resolutions


@dataclass
class CoflabbySurjection:
    """``0 -> C -> P -> N -> 0`` with ``P = Z[S]``."""

    target: GLattice
    P: GLattice
    pi: GMap
    C: GLattice
    kernel: list  # rows: basis of C inside P
    base: Base
    summands: list  # (class index, multiplicity)


def _permutation_on(N: GLattice, vectors: list[tuple]) -> list[Perm]:
    pos = {v: i for i, v in enumerate(vectors)}
    V = as_array(np.array(vectors, dtype=object))
    perms = []
    for A in N.gen_matrices:
        img = matmul(V, A).tolist()
        perms.append(Perm([pos[tuple(int(t) for t in w)] for w in img]))
    return perms


def _stabilizer_class(N: GLattice, table: SubgroupClassTable, v: tuple) -> int:
    G = N.group
    row = np.array(v, dtype=np.int64)
    idx = [i for i, A in enumerate(N.element_matrices()) if np.array_equal(row @ A, row)]
    return table.class_of(G.subgroup_by_indices(idx))


def coflabby_surjection(
    N: GLattice, table: SubgroupClassTable, base: Optional[Base] = None
) -> CoflabbySurjection:
    """Fixed-point surjective ``Z[S] -> N``; the kernel ``C`` is coflabby."""
    if table.group is not N.group:
        raise ValueError("class table of a different group")
    base = base or naive_base(N, table)
    S = base.vectors()
    if not S:
        raise ValueError("empty base")
    checker = _SurjectivityChecker(N, table, base.orbits)
    if not checker.ok(range(len(base.orbits))):
        raise ArithmeticError("the base is not fixed-point surjective")
    G = N.group
    perms = _permutation_on(N, S)
    m = len(S)
    Pm = []
    for p in perms:
        A = np.zeros((m, m), dtype=np.int64)
        A[np.arange(m), list(p.img)] = 1
        Pm.append(A)
    P = GLattice(G, Pm, m, name="Z[S]")
    Pi = as_array(np.array(S, dtype=object))
    pi = GMap(P, N, Pi)
    K = left_kernel_z(IntMatrix(Pi.tolist(), cols=N.rank))
    if K:
        Kn = as_array(np.array(K, dtype=object))
        Cm = [as_array(np.array(coordinates(K, matmul(Kn, A).tolist()), dtype=object)) for A in Pm]
    else:
        Cm = [np.zeros((0, 0), dtype=np.int64) for _ in Pm]
    C = GLattice(G, Cm, len(K), name="C")
    counts: dict[int, int] = {}
    for orb in base.orbits:
        c = _stabilizer_class(N, table, orb[0])
        counts[c] = counts.get(c, 0) + 1
    return CoflabbySurjection(N, P, pi, C, K, base, sorted(counts.items()))


@dataclass
class FlabbyResolution:
    """``0 -> M -> P -> F -> 0`` with ``P`` permutation and ``F`` flabby."""

    M: GLattice
    P: GLattice
    inject: GMap
    project: GMap
    F: GLattice
    summands: list = field(default_factory=list)  # (class index, multiplicity)
    base: Optional[Base] = None

    def is_exact(self) -> bool:
        """``inject`` injective, ``project`` surjective, image = kernel, ranks add up."""
        X = self.inject.matrix
        Y = self.project.matrix
        if self.P.rank != self.M.rank + self.F.rank:
            return False
        if matmul(X, Y).any():
            return False
        from .intlat import kernel_z, rank_exact

        if rank_exact(X.tolist(), self.P.rank) != self.M.rank:
            return False
        # image of inject is saturated and equals ker(project)
        ker = kernel_z(IntMatrix(Y.T.tolist(), cols=self.P.rank)) if self.F.rank else None
        if ker is not None:
            try:
                coordinates(X.tolist(), ker)
            except ValueError:
                return False
        # project is onto: its columns span Z^rank(F) as a row lattice of Y^T... i.e. rows of Y span
        return spans_lattice(Y.tolist(), self.F.rank) if self.F.rank else True


def flabby_resolution(
    M: GLattice, table: SubgroupClassTable, base: Optional[Base] = None
) -> FlabbyResolution:
    """Resolve ``M°`` by a coflabby surjection and dualise.

    ``base`` is a base of the dual lattice ``M°``; by default the best
    candidate of :func:`minimize_base` is used.
    """
    Md = dual(M)
    if base is None:
        base = minimize_base(Md, table)[0]
    sur = coflabby_surjection(Md, table, base)
    inject = GMap(M, sur.P, sur.pi.matrix.T.copy())
    F = dual(sur.C)
    Kt = as_array(np.array(sur.kernel, dtype=object).T.copy()) if sur.kernel else np.zeros((sur.P.rank, 0), dtype=np.int64)
    project = GMap(sur.P, F, Kt)
    return FlabbyResolution(M, sur.P, inject, project, F, sur.summands, base)


@dataclass
class FlabbyClassRep:
    F: GLattice
    resolution: FlabbyResolution


def flabby_class(M: GLattice, table: SubgroupClassTable, restarts: int = 0, seed: int = 0) -> FlabbyClassRep:
    """Representative of ``[M]^fl`` from the smallest base found."""
    base = minimize_base(dual(M), table, restarts=restarts, seed=seed)[0]
    res = flabby_resolution(M, table, base)
    return FlabbyClassRep(res.F, res)

"""Tate cohomology of G-lattices in degrees -1, 0 and 1.

Lattices act on row vectors (see :mod:`normtori.glattice`), so the norm of a
subgroup acts as ``v -> v @ N`` and 1-cocycles satisfy
``f(g h) = f(g) @ A(h) + f(h)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .glattice import GLattice, fixed_sublattice, matmul
from .intlat import IntMatrix, coordinates, kernel_z, snf
from .permgrp import CapError, PermGroup, SubgroupClassTable

__all__ = [
    "AbelianGroupStructure",
    "DEFAULT_H1_CAP",
    "norm_matrix",
    "tate_h0",
    "tate_hminus1",
    "h1",
    "h1_bar",
    "is_flabby",
    "is_coflabby",
]

DEFAULT_H1_CAP = 1000


@dataclass(frozen=True)
class AbelianGroupStructure:
    """``Z^free_rank + Z/d_1 + ... + Z/d_k`` with ``d_1 | d_2 | ... | d_k``."""

    elementary_divisors: tuple = field(default=())
    free_rank: int = 0

    @classmethod
    def from_relations(cls, relations: list[list[int]], dim: int) -> "AbelianGroupStructure":
        """Structure of ``Z^dim`` modulo the span of ``relations``."""
        if dim == 0:
            return cls()
        if not relations:
            return cls((), dim)
        diag = snf(IntMatrix(relations, cols=dim)).diagonal
        nonzero = [d for d in diag if d]
        return cls(tuple(d for d in nonzero if d > 1), dim - len(nonzero))

    @property
    def is_trivial(self) -> bool:
        return not self.elementary_divisors and self.free_rank == 0

    @property
    def order(self) -> Optional[int]:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.elementary_divisors:
            out *= d
        return out

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.elementary_divisors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def _group_of(M: GLattice, H: Optional[PermGroup]) -> PermGroup:
    if H is None or H is M.group:
        return M.group
    if not H.is_subgroup_of(M.group):
        raise ValueError("H is not a subgroup of the lattice's group")
    return H


def _element_mats(M: GLattice, H: PermGroup) -> list[np.ndarray]:
    if H is M.group:
        return M.element_matrices()
    return [M.matrix(h) for h in H.elements]


def norm_matrix(M: GLattice, H: Optional[PermGroup] = None) -> np.ndarray:
    """``sum of A(h)`` over all elements of ``H``."""
    H = _group_of(M, H)
    out = np.zeros((M.rank, M.rank), dtype=np.int64)
    for A in _element_mats(M, H):
        out = out + A
    return out


def tate_h0(M: GLattice, H: Optional[PermGroup] = None) -> AbelianGroupStructure:
    """``M^H / M N_H``."""
    H = _group_of(M, H)
    fixed = fixed_sublattice(M, H)
    if not fixed:
        return AbelianGroupStructure()
    N = norm_matrix(M, H)
    rows = [r for r in N.tolist() if any(r)]
    coords = coordinates(fixed, rows) if rows else []
    return AbelianGroupStructure.from_relations(coords, len(fixed))


def tate_hminus1(M: GLattice, H: Optional[PermGroup] = None) -> AbelianGroupStructure:
    """``ker N_H / I_H M`` with ``I_H M`` spanned by ``e_j (A(h) - 1)`` for generators ``h``."""
    H = _group_of(M, H)
    N = norm_matrix(M, H)
    ker = kernel_z(IntMatrix(N.T.tolist(), cols=M.rank))
    if not ker:
        return AbelianGroupStructure()
    eye = np.eye(M.rank, dtype=np.int64)
    rels = []
    for h in H.gens:
        D = M.matrix(h) - eye
        rels.extend(r for r in D.tolist() if any(r))
    coords = coordinates(ker, rels) if rels else []
    return AbelianGroupStructure.from_relations(coords, len(ker))


def _check_cap(H: PermGroup, cap: int) -> None:
    if H.order() > cap:
        raise CapError(f"|H| = {H.order()} exceeds the H^1 cap of {cap}")


def h1(M: GLattice, H: Optional[PermGroup] = None, cap: int = DEFAULT_H1_CAP) -> AbelianGroupStructure:
    """``H^1(H, M)`` from cocycles on the generators of ``H``.

    A cocycle is determined by its values on generators; it extends along the
    enumeration tree of ``H`` and must agree on every other Cayley-graph edge.
    """
    H = _group_of(M, H)
    _check_cap(H, cap)
    r = M.rank
    k = len(H.gens)
    if r == 0 or k == 0:
        return AbelianGroupStructure()
    gm = [M.matrix(h) for h in H.gens]
    n = k * r
    # f(x) = u @ C[x] with u the concatenated generator values
    parent, via = H.word_data()
    C: list[np.ndarray] = [np.zeros((n, r), dtype=np.int64)]
    E = []
    for s in range(k):
        e = np.zeros((n, r), dtype=np.int64)
        e[s * r : (s + 1) * r, :] = np.eye(r, dtype=np.int64)
        E.append(e)
    for i in range(1, len(parent)):
        C.append(matmul(C[parent[i]], gm[via[i]]) + E[via[i]])
    index = H._index
    rows: list[list[int]] = []
    for i, x in enumerate(H.elements):
        for s, g in enumerate(H.gens):
            y = index[tuple(g.img[p] for p in x)]
            D = matmul(C[i], gm[s]) + E[s] - C[y]
            if D.any():
                rows.extend(c for c in D.T.tolist() if any(c))
    Z = kernel_z(IntMatrix(rows, cols=n)) if rows else np.eye(n, dtype=np.int64).tolist()
    if not Z:
        return AbelianGroupStructure()
    eye = np.eye(r, dtype=np.int64)
    bound = np.hstack([A - eye for A in gm])  # row j: coboundary of e_j
    B = [b for b in bound.tolist() if any(b)]
    coords = coordinates(Z, B) if B else []
    return AbelianGroupStructure.from_relations(coords, len(Z))


def h1_bar(M: GLattice, H: Optional[PermGroup] = None, cap: int = 200) -> AbelianGroupStructure:
    """``H^1(H, M)`` from the inhomogeneous bar complex over all pairs.

    Quadratic in ``|H|``; intended as an independent check of :func:`h1`.
    """
    H = _group_of(M, H)
    _check_cap(H, cap)
    r = M.rank
    mats = _element_mats(M, H)
    G = len(mats)
    if r == 0:
        return AbelianGroupStructure()
    T = H.mult_table()
    n = G * r
    rows = []
    for g in range(G):
        for h in range(G):
            gh = int(T[g, h])
            # f(gh) - f(g) A(h) - f(h) = 0, one equation per coordinate
            for c in range(r):
                row = [0] * n
                row[gh * r + c] += 1
                for j in range(r):
                    row[g * r + j] -= int(mats[h][j, c])
                row[h * r + c] -= 1
                if any(row):
                    rows.append(row)
    Z = kernel_z(IntMatrix(rows, cols=n))
    if not Z:
        return AbelianGroupStructure()
    eye = np.eye(r, dtype=np.int64)
    B = [b for b in np.hstack([A - eye for A in mats]).tolist() if any(b)]
    coords = coordinates(Z, B) if B else []
    return AbelianGroupStructure.from_relations(coords, len(Z))


def is_flabby(M: GLattice, table: SubgroupClassTable) -> bool:
    """``Ĥ^-1(H, M) = 0`` for every class representative."""
    if table.group is not M.group:
        raise ValueError("class table of a different group")
    return all(tate_hminus1(M, H).is_trivial for H in table.representatives)


def is_coflabby(M: GLattice, table: SubgroupClassTable, cap: int = DEFAULT_H1_CAP) -> bool:
    """``H^1(H, M) = 0`` for every class representative."""
    if table.group is not M.group:
        raise ValueError("class table of a different group")
    return all(h1(M, H, cap).is_trivial for H in table.representatives)

"""G-lattices as integral representations.

Convention: a lattice vector is a row vector and a group element ``g`` acts by
``v -> v @ A(g)``; row ``i`` of ``A(g)`` is the image of the ``i``-th basis
vector.  Together with left-to-right permutation products this makes
``A(g h) = A(g) @ A(h)``.  A :class:`GMap` from ``M`` to ``N`` is a
``rank(M) x rank(N)`` matrix ``X`` with ``A_M(g) @ X == X @ A_N(g)``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .intlat import IntMatrix, kernel_z
from .permgrp import CosetTable, PermGroup, cosets, is_transitive

__all__ = [
    "GLattice",
    "GMap",
    "trivial_lattice",
    "permutation_lattice",
    "chevalley_module",
    "dual",
    "direct_sum",
    "restrict",
    "fixed_sublattice",
    "hom_basis",
    "as_array",
]

_SAFE = 2**62


def as_array(A) -> np.ndarray:
    """Integer ndarray (int64 when it fits, else object)."""
    if isinstance(A, IntMatrix):
        rows, cols = A.shape
        A = A.tolist()
        arr = np.array(A, dtype=object).reshape(rows, cols)
    else:
        arr = np.asarray(A)
    if arr.dtype == object:
        if arr.size == 0 or max(abs(int(x)) for x in arr.ravel()) < 2**31:
            return arr.astype(np.int64)
        return arr
    return arr.astype(np.int64)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product, switching to Python integers if int64 could overflow."""
    if a.dtype != object and b.dtype != object and a.size and b.size:
        bound = int(np.abs(a).max()) * int(np.abs(b).max()) * a.shape[1]
        if bound < _SAFE:
            return a @ b
    out = np.dot(a.astype(object), b.astype(object))
    return as_array(out)


class GLattice:
    """A lattice ``Z^rank`` with a right action of a permutation group.

    Only the generator matrices are stored; matrices of all elements are
    produced on demand along the group's enumeration tree.
    """

    def __init__(self, group: PermGroup, gen_matrices: Sequence, rank: Optional[int] = None, name: str = ""):
        mats = [as_array(m) for m in gen_matrices]
        if len(mats) != len(group.gens):
            raise ValueError("need one matrix per group generator")
        if rank is None:
            rank = mats[0].shape[0] if mats else 0
        for m in mats:
            if m.shape != (rank, rank):
                raise ValueError(f"action matrix of shape {m.shape}, expected {(rank, rank)}")
        self.group = group
        self.rank = rank
        self.gen_matrices = tuple(mats)
        self.name = name
        self._lock = threading.Lock()
        self._all: Optional[list[np.ndarray]] = None

    def __repr__(self) -> str:
        return f"<GLattice {self.name or ''} rank {self.rank}>"

    @property
    def action(self) -> list[IntMatrix]:
        return [IntMatrix(m.tolist(), cols=self.rank) for m in self.gen_matrices]

    def element_matrices(self) -> list[np.ndarray]:
        """Matrices of all elements, in the group's enumeration order."""
        if self._all is None:
            with self._lock:
                if self._all is None:
                    parent, via = self.group.word_data()
                    out = [np.eye(self.rank, dtype=np.int64)]
                    for i in range(1, len(parent)):
                        out.append(matmul(out[parent[i]], self.gen_matrices[via[i]]))
                    self._all = out
        return self._all

    def matrix(self, g) -> np.ndarray:
        """Matrix of a group element (a :class:`Perm` or element index)."""
        i = g if isinstance(g, (int, np.integer)) else self.group.index_of(g)
        return self.element_matrices()[int(i)]

    def is_homomorphism(self) -> bool:
        """Check ``A(x g) = A(x) A(g)`` for every element and generator."""
        G = self.group
        mats = self.element_matrices()
        index = G._index
        for i, x in enumerate(G.elements):
            for g, A in zip(G.gens, self.gen_matrices):
                y = index[tuple(g.img[p] for p in x)]
                if not np.array_equal(matmul(mats[i], A), mats[y]):
                    return False
        return True

    def is_unimodular(self) -> bool:
        from .intlat import det

        return all(abs(det(m.tolist())) == 1 for m in self.gen_matrices) if self.rank else True


@dataclass
class GMap:
    """Equivariant map ``source -> target`` as a ``rank(source) x rank(target)`` matrix."""

    source: GLattice
    target: GLattice
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = as_array(self.matrix).reshape(self.source.rank, self.target.rank)

    def is_equivariant(self) -> bool:
        X = self.matrix
        return all(
            np.array_equal(matmul(A, X), matmul(X, B))
            for A, B in zip(self.source.gen_matrices, self.target.gen_matrices)
        )


# ---------------------------------------------------------------------------
# constructors


def trivial_lattice(G: PermGroup, rank: int = 1) -> GLattice:
    eye = np.eye(rank, dtype=np.int64)
    return GLattice(G, [eye] * len(G.gens), rank, name="Z" if rank == 1 else f"Z^{rank}")


def _perm_matrix(images0: Sequence[int]) -> np.ndarray:
    n = len(images0)
    A = np.zeros((n, n), dtype=np.int64)
    A[np.arange(n), list(images0)] = 1
    return A


def permutation_lattice(G: PermGroup, H: PermGroup, table: Optional[CosetTable] = None) -> GLattice:
    """``Z[G/H]`` with basis the cosets of ``H``; ``e_i A(g) = e_{i.g}``."""
    table = table or cosets(G, H)
    mats = [_perm_matrix(p.img) for p in table.generator_action]
    M = GLattice(G, mats, len(table), name=f"Z[G/H{H.order()}]")
    M.cosets = table
    return M


def points_lattice(G: PermGroup) -> GLattice:
    """The permutation lattice on the points ``1..degree``."""
    return GLattice(G, [_perm_matrix(g.img) for g in G.gens], G.degree, name="Z[points]")


def chevalley_module(G: PermGroup) -> GLattice:
    """``J``: the points lattice modulo the all-ones vector, with basis the
    images of ``e_1 .. e_{n-1}`` (so ``e_n = -(e_1 + ... + e_{n-1})``)."""
    if not is_transitive(G):
        raise ValueError("the Chevalley module needs a transitive group")
    n = G.degree
    mats = []
    for g in G.gens:
        A = np.zeros((n - 1, n - 1), dtype=np.int64)
        for i in range(n - 1):
            j = g.img[i]
            if j == n - 1:
                A[i, :] = -1
            else:
                A[i, j] = 1
        mats.append(A)
    return GLattice(G, mats, n - 1, name="J")


def _inverse_matrix(M: GLattice, k: int) -> np.ndarray:
    g = M.group.gens[k]
    o = g.order()
    A = M.gen_matrices[k]
    out = np.eye(M.rank, dtype=np.int64)
    for _ in range(o - 1):
        out = matmul(out, A)
    return out


def dual(M: GLattice) -> GLattice:
    """Dual lattice: each action matrix replaced by its inverse transpose."""
    mats = [_inverse_matrix(M, k).T.copy() for k in range(len(M.gen_matrices))]
    out = GLattice(M.group, mats, M.rank, name=f"{M.name}°" if M.name else "")
    return out


def direct_sum(Ms: Sequence[GLattice]) -> GLattice:
    if not Ms:
        raise ValueError("empty direct sum needs a group")
    G = Ms[0].group
    if any(M.group is not G for M in Ms):
        raise ValueError("direct summands must share the same group")
    if len(Ms) == 1:
        return Ms[0]
    r = sum(M.rank for M in Ms)
    mats = []
    for k in range(len(G.gens)):
        A = np.zeros((r, r), dtype=object if any(M.gen_matrices[k].dtype == object for M in Ms) else np.int64)
        o = 0
        for M in Ms:
            A[o : o + M.rank, o : o + M.rank] = M.gen_matrices[k]
            o += M.rank
        mats.append(A)
    return GLattice(G, mats, r, name=" + ".join(M.name or "?" for M in Ms))


def restrict(M: GLattice, H: PermGroup) -> GLattice:
    """The same lattice viewed as an ``H``-lattice."""
    G = M.group
    if not H.is_subgroup_of(G):
        raise ValueError("restriction to a group that is not a subgroup")
    mats = [M.matrix(h) for h in H.gens]
    return GLattice(H, mats, M.rank, name=M.name)


def _fixed_system(M: GLattice, mats: Iterable[np.ndarray]) -> list[list[int]]:
    eye = np.eye(M.rank, dtype=np.int64)
    rows: list[list[int]] = []
    for A in mats:
        D = (A - eye).T
        rows.extend(r for r in D.tolist() if any(r))
    return rows


def fixed_sublattice(M: GLattice, H: Optional[PermGroup] = None) -> list[list[int]]:
    """Saturated basis (row vectors) of ``{v : v A(h) = v for h in H}``."""
    if H is None:
        mats = M.gen_matrices
    else:
        G = M.group
        if H is not G and not H.is_subgroup_of(G):
            raise ValueError("H is not a subgroup of the lattice's group")
        mats = [M.matrix(h) for h in H.gens]
    rows = _fixed_system(M, mats)
    if not rows:
        return [[int(i == j) for j in range(M.rank)] for i in range(M.rank)]
    return kernel_z(IntMatrix(rows, cols=M.rank))


def hom_basis(A: GLattice, B: GLattice) -> list[np.ndarray]:
    """Z-basis of the equivariant maps ``A -> B`` (as ``rank A x rank B`` matrices)."""
    if A.group is not B.group:
        raise ValueError("lattices over different groups")
    ra, rb = A.rank, B.rank
    blocks = []
    eye_a = np.eye(ra, dtype=np.int64)
    eye_b = np.eye(rb, dtype=np.int64)
    for MA, MB in zip(A.gen_matrices, B.gen_matrices):
        # vec(MA X - X MB) with row-major vec
        blocks.append(np.kron(MA.astype(object), eye_b) - np.kron(eye_a, MB.T.astype(object)))
    if not blocks:
        return [np.array(v, dtype=np.int64).reshape(ra, rb) for v in np.eye(ra * rb, dtype=np.int64).tolist()]
    S = np.vstack(blocks)
    rows = [r for r in S.tolist() if any(r)]
    basis = kernel_z(IntMatrix(rows, cols=ra * rb)) if rows else np.eye(ra * rb, dtype=np.int64).tolist()
    return [as_array(np.array(v, dtype=object).reshape(ra, rb)) for v in basis]

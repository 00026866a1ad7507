"""Exact integer linear algebra.

Everything here works on Python ints, so entries never overflow.  Matrices
are :class:`IntMatrix` values (immutable, explicit shape so that 0 x n and
n x 0 matrices are representable); most functions also accept plain nested
sequences or numpy integer arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence

import numpy as np
from sympy import factorint

__all__ = [
    "IntMatrix",
    "SmithDecomposition",
    "LinearSolution",
    "DimensionError",
    "as_matrix",
    "hnf",
    "snf",
    "elementary_divisors",
    "solve_z",
    "solve_matrix_z",
    "kernel_z",
    "left_kernel_z",
    "det",
    "is_unimodular",
    "independent_rows",
    "right_inverse",
    "rank_mod_p",
    "rref_mod_p",
    "LARGE_PRIME",
    "rank_exact",
    "nullspace_mod_p",
    "spans_lattice",
    "coordinates",
]

# 2**31 - 1; products of two residues fit in int64
_P = 2147483647


class DimensionError(ValueError):
    pass


class IntMatrix:
    """Dense integer matrix with an explicit shape."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Sequence[int]] = (), cols: Optional[int] = None):
        rows = tuple(tuple(map(int, r)) for r in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged matrix rows")
        self.rows = len(rows)
        self.cols = cols
        self._data = rows

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: Optional[int] = None,
                 cols: Optional[int] = None) -> "IntMatrix":
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        m = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(entries):
            m[i][i] = d
        return cls(m, cols=cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def __iter__(self):
        return iter(self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            try:
                other = as_matrix(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, cols={self.cols})"

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(zip(*self._data), cols=self.rows) if self.rows else IntMatrix.zeros(self.cols, 0)

    def __matmul__(self, other) -> "IntMatrix":
        other = as_matrix(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols_ = list(zip(*other._data)) if other.rows else [()] * other.cols
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols_] for r in self._data],
            cols=other.cols,
        )

    def __add__(self, other) -> "IntMatrix":
        other = as_matrix(other)
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
                         cols=self.cols)

    def __sub__(self, other) -> "IntMatrix":
        other = as_matrix(other)
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        return IntMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
                         cols=self.cols)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self._data], cols=self.cols)

    def apply(self, v: Sequence[int]) -> list[int]:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise DimensionError("vector length mismatch")
        return [sum(a * b for a, b in zip(r, v)) for r in self._data]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def to_numpy(self) -> np.ndarray:
        flat = [x for r in self._data for x in r]
        big = any(abs(x) >= 2**62 for x in flat)
        return np.array(flat, dtype=object if big else np.int64).reshape(self.rows, self.cols)


def as_matrix(a, cols: Optional[int] = None) -> IntMatrix:
    if isinstance(a, IntMatrix):
        return a
    if isinstance(a, np.ndarray):
        if a.ndim != 2:
            raise DimensionError("expected a 2-d array")
        return IntMatrix(a.tolist(), cols=a.shape[1])
    return IntMatrix(a, cols=cols)


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == S`` with U, V unimodular and S in Smith form."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i, i] for i in range(min(self.S.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


@dataclass(frozen=True)
class LinearSolution:
    particular: Optional[list[int]]
    kernel_basis: list[list[int]]

    @property
    def solvable(self) -> bool:
        return self.particular is not None


# ---------------------------------------------------------------------------
# row-style Hermite normal form with transform


def _hnf_rows(rows: list[list[int]], ncols: int, track: Optional[list[list[int]]] = None):
    """In-place row HNF.  Returns the list of pivot columns.

    Pivots are chosen as the entry of least absolute value in the current
    column (lowest row index on ties).  ``track`` receives the same row
    operations, so starting it at the identity yields the transform.
    """
    m = len(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        while True:
            best = -1
            bval = 0
            for i in range(r, m):
                x = rows[i][c]
                if x and (best < 0 or abs(x) < bval):
                    best, bval = i, abs(x)
                    if bval == 1:
                        break
            if best < 0:
                break
            if best != r:
                rows[r], rows[best] = rows[best], rows[r]
                if track is not None:
                    track[r], track[best] = track[best], track[r]
            prow = rows[r]
            p = prow[c]
            done = True
            for i in range(r + 1, m):
                x = rows[i][c]
                if x:
                    q = x // p
                    if q:
                        ri = rows[i]
                        rows[i] = [a - q * b for a, b in zip(ri, prow)]
                        if track is not None:
                            track[i] = [a - q * b for a, b in zip(track[i], track[r])]
                    if rows[i][c]:
                        done = False
            if done:
                break
        if rows[r][c] == 0:
            continue
        if rows[r][c] < 0:
            rows[r] = [-a for a in rows[r]]
            if track is not None:
                track[r] = [-a for a in track[r]]
        p = rows[r][c]
        prow = rows[r]
        for i in range(r):
            x = rows[i][c]
            if x:
                q = x // p
                if q:
                    rows[i] = [a - q * b for a, b in zip(rows[i], prow)]
                    if track is not None:
                        track[i] = [a - q * b for a, b in zip(track[i], track[r])]
        pivots.append(c)
        r += 1
    return pivots


def hnf(A, transform: bool = False):
    """Row Hermite normal form ``H`` of ``A`` (and ``U`` with ``U @ A == H``)."""
    A = as_matrix(A)
    rows = A.tolist()
    track = [[int(i == j) for j in range(A.rows)] for i in range(A.rows)] if transform else None
    _hnf_rows(rows, A.cols, track)
    H = IntMatrix(rows, cols=A.cols)
    if transform:
        return H, IntMatrix(track, cols=A.rows)
    return H


# ---------------------------------------------------------------------------
# Smith normal form


def snf(A) -> SmithDecomposition:
    """Smith normal form with unimodular transforms."""
    A = as_matrix(A)
    m, n = A.shape
    S = A.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    # V is kept transposed so that column operations become row operations
    Vt = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_op(dst, src, q):
        # column dst -= q * column src
        for row in S:
            row[dst] -= q * row[src]
        Vt[dst] = [a - q * b for a, b in zip(Vt[dst], Vt[src])]

    def swap_cols(a, b):
        for row in S:
            row[a], row[b] = row[b], row[a]
        Vt[a], Vt[b] = Vt[b], Vt[a]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = S[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        if i != t:
            S[t], S[i] = S[i], S[t]
            U[t], U[i] = U[i], U[t]
        if j != t:
            swap_cols(t, j)
        while True:
            p = S[t][t]
            changed = False
            for i in range(t + 1, m):
                x = S[i][t]
                if x:
                    q = x // p
                    S[i] = [a - q * b for a, b in zip(S[i], S[t])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[t])]
                    if S[i][t]:
                        changed = True
            for j in range(t + 1, n):
                x = S[t][j]
                if x:
                    col_op(j, t, x // p)
                    if S[t][j]:
                        changed = True
            if changed:
                # move the smallest remainder into the pivot slot
                cand = [(abs(S[i][t]), 0, i) for i in range(t + 1, m) if S[i][t]]
                cand += [(abs(S[t][j]), 1, j) for j in range(t + 1, n) if S[t][j]]
                _, kind, k = min(cand)
                if kind == 0:
                    S[t], S[k] = S[k], S[t]
                    U[t], U[k] = U[k], U[t]
                else:
                    swap_cols(t, k)
                continue
            # divisibility: fold in an offending row
            bad = None
            for i in range(t + 1, m):
                if any(x % p for x in S[i][t + 1:]):
                    bad = i
                    break
            if bad is None:
                break
            S[t] = [a + b for a, b in zip(S[t], S[bad])]
            U[t] = [a + b for a, b in zip(U[t], U[bad])]
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    V = IntMatrix(zip(*Vt), cols=n) if n else IntMatrix.zeros(0, 0)
    return SmithDecomposition(IntMatrix(U, cols=m), IntMatrix(S, cols=n), V)


def elementary_divisors(A) -> list[int]:
    """Nonzero invariant factors of ``A`` (including 1s)."""
    A = as_matrix(A)
    if A.rows == 0 or A.cols == 0:
        return []
    # shrink to an independent row set first; cheap and keeps SNF small
    H = hnf(A)
    rows = [r for r in H.tolist() if any(r)]
    if not rows:
        return []
    d = snf(IntMatrix(rows, cols=A.cols)).diagonal
    return [x for x in d if x]


# ---------------------------------------------------------------------------
# modular helpers


def _mod_array(A, p: int) -> np.ndarray:
    if isinstance(A, np.ndarray) and A.dtype == np.int64 and A.ndim == 2 and p < 2**31:
        return A % p
    rows = as_matrix(A)
    dtype = np.int64 if p < 2**31 else object
    return np.array([[x % p for x in r] for r in rows], dtype=dtype).reshape(rows.rows, rows.cols)


def _rref_mod_p(arr: np.ndarray, p: int):
    """Reduced row echelon form mod p; returns (R, pivot columns, row order)."""
    work = arr.copy()
    m, n = work.shape
    order = np.arange(m)
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        nz = np.nonzero(work[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            work[[r, k]] = work[[k, r]]
            order[[r, k]] = order[[k, r]]
        inv = pow(int(work[r, c]), p - 2, p)
        work[r] = (work[r] * inv) % p
        col = work[:, c].copy()
        col[r] = 0
        nzc = np.nonzero(col)[0]
        if nzc.size:
            work[nzc] = (work[nzc] - (col[nzc, None] * work[r][None, :]) % p) % p
        pivots.append(c)
        r += 1
    return work, pivots, order


LARGE_PRIME = _P


def rref_mod_p(A, p: int):
    """Reduced row echelon form modulo ``p``: ``(R, pivot columns, row order)``."""
    return _rref_mod_p(_mod_array(A, p), p)


def independent_rows(A, p: int = _P) -> list[int]:
    """Indices of a maximal set of rows that are independent modulo ``p``.

    Rows independent mod p are independent over Q; with a large prime the
    selection almost always spans the rational row space as well.
    """
    arr = _mod_array(A, p)
    if arr.size == 0:
        return []
    _, pivots, order = _rref_mod_p(arr, p)
    return sorted(int(i) for i in order[: len(pivots)])


def rank_mod_p(A, p: int = _P) -> int:
    arr = _mod_array(A, p)
    if arr.size == 0:
        return 0
    return len(_rref_mod_p(arr, p)[1])


def nullspace_mod_p(A, p: int) -> list[list[int]]:
    """Basis of ``{x : A x = 0 (mod p)}`` with entries in ``[0, p)``."""
    arr = _mod_array(A, p)
    m, n = arr.shape
    if m == 0:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    R, pivots, _ = _rref_mod_p(arr, p)
    pset = set(pivots)
    basis = []
    for f in range(n):
        if f in pset:
            continue
        v = [0] * n
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = int(-R[i, f]) % p
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# exact rational row reduction and integral kernels


def _rref_exact(rows: list[list[int]], ncols: int):
    """Fraction-free Gauss-Jordan elimination.

    Returns ``(M, pivots, d)`` where ``M / d`` is the reduced row echelon
    form.  Every entry of ``M`` is a minor of the input, so the numbers stay
    as small as the problem allows.
    """
    if not rows or ncols == 0:
        return [], [], 1
    M = np.array(rows, dtype=object).reshape(len(rows), ncols)
    m = M.shape[0]
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r >= m:
            break
        col = M[r:, c]
        nz = [i for i in range(len(col)) if col[i] != 0]
        if not nz:
            continue
        k = r + min(nz, key=lambda i: (abs(col[i]), i))
        if k != r:
            M[[r, k]] = M[[k, r]]
        p = M[r, c]
        prow = M[r].copy()
        colv = M[:, c].copy()
        M = (p * M - np.outer(colv, prow)) // prev
        M[r] = prow
        prev = p
        pivots.append(c)
        r += 1
    d = prev
    M = M[:r]
    if d < 0:
        M = -M
        d = -d
    return [[int(x) for x in row] for row in M], pivots, int(d)


def rank_exact(rows, ncols: int) -> int:
    return len(_rref_exact([list(r) for r in rows], ncols)[1])


def _content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def _prime_factors(n: int) -> list[int]:
    return sorted(factorint(abs(n)).keys())


def _saturate(basis: list[list[int]], primes: Sequence[int]) -> list[list[int]]:
    """Replace ``basis`` by a basis of its saturation at the given primes."""
    basis = [list(v) for v in basis]
    for p in primes:
        while basis:
            null = nullspace_mod_p([list(c) for c in zip(*basis)], p)
            if not null:
                break
            c = null[0]
            i = next(j for j, x in enumerate(c) if x)
            inv = pow(c[i], -1, p)
            c = [x * inv % p for x in c]
            comb = [0] * len(basis[0])
            for cj, v in zip(c, basis):
                if cj:
                    comb = [a + cj * b for a, b in zip(comb, v)]
            basis[i] = [x // p for x in comb]
    return basis


class _Kernel:
    """Integral kernel of a matrix computed from its rational echelon form."""

    def __init__(self, A: IntMatrix, select: bool = True):
        n = A.cols
        rows = A.tolist()
        if select and A.rows > 4:
            idx = independent_rows(A)
            rows = [rows[i] for i in idx]
        M, pivots, d = _rref_exact(rows, n)
        self.pivots = pivots
        pset = set(pivots)
        self.free = [j for j in range(n) if j not in pset]
        basis = []
        lcm = 1
        for f in self.free:
            v = [0] * n
            v[f] = d
            for i, c in enumerate(pivots):
                v[c] = -M[i][f]
            g = _content(v)
            v = [x // g for x in v]
            lcm = lcm * v[f] // gcd(lcm, v[f])
            basis.append(v)
        if lcm != 1:
            basis = _saturate(basis, _prime_factors(lcm))
        self.basis = basis
        self.unit_free = all(
            v[f] == int(i == k) for i, v in enumerate(basis) for k, f in enumerate(self.free)
        )


def _annihilates(A: IntMatrix, basis: list[list[int]]) -> bool:
    if not basis or A.rows == 0:
        return True
    a = np.array(A.tolist(), dtype=object)
    b = np.array(basis, dtype=object).T
    amax = max(abs(int(x)) for x in a.ravel()) if a.size else 0
    bmax = max(abs(int(x)) for x in b.ravel())
    if amax * bmax * A.cols < 2**62:
        return not (a.astype(np.int64) @ b.astype(np.int64)).any()
    return not np.dot(a, b).any()


def _kernel(A: IntMatrix) -> _Kernel:
    ker = _Kernel(A)
    if not _annihilates(A, ker.basis):
        # the modular row selection missed part of the row space
        ker = _Kernel(A, select=False)
    return ker


def kernel_z(A) -> list[list[int]]:
    """Saturated Z-basis of ``{x : A x = 0}``.

    When the lattice admits it, the basis is echelon-like with unit entries
    on the free coordinates, which keeps entries small.
    """
    A = as_matrix(A)
    if A.rows == 0:
        return [[int(i == j) for j in range(A.cols)] for i in range(A.cols)]
    return _kernel(A).basis


def left_kernel_z(A) -> list[list[int]]:
    """Saturated Z-basis of ``{y : y A = 0}``."""
    return kernel_z(as_matrix(A).T)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _xgcd_list(values: Sequence[int]) -> tuple[int, list[int]]:
    """``g, c`` with ``sum(c_i * v_i) == g == gcd(values)``."""
    g = 0
    coeffs = [0] * len(values)
    for i, v in enumerate(values):
        if v == 0:
            continue
        g, x, y = _xgcd(g, v)
        coeffs = [c * x for c in coeffs]
        coeffs[i] = y
    return g, coeffs


def solve_z(A, b: Sequence[int]) -> LinearSolution:
    """All integer solutions of ``A x = b`` as particular + kernel lattice."""
    A = as_matrix(A)
    if len(b) != A.rows:
        raise DimensionError(f"rhs has length {len(b)}, expected {A.rows}")
    n = A.cols
    if A.rows == 0:
        return LinearSolution([0] * n, kernel_z(A))
    ker = _kernel(A)
    aug = IntMatrix([list(r) + [-int(bi)] for r, bi in zip(A, b)], cols=n + 1)
    hom = kernel_z(aug)
    g, coeffs = _xgcd_list([v[n] for v in hom])
    if g != 1:
        return LinearSolution(None, ker.basis)
    x = [0] * n
    for c, v in zip(coeffs, hom):
        if c:
            x = [a + c * y for a, y in zip(x, v[:n])]
    if ker.unit_free:
        # canonical representative with zero free coordinates
        for v, f in zip(ker.basis, ker.free):
            q = x[f]
            if q:
                x = [a - q * y for a, y in zip(x, v)]
    return LinearSolution(x, ker.basis)


def solve_matrix_z(A, B) -> Optional[IntMatrix]:
    """Integer ``X`` with ``A @ X == B``, or None."""
    A = as_matrix(A)
    B = as_matrix(B)
    if B.rows != A.rows:
        raise DimensionError("row count mismatch")
    cols = []
    for c in B.T:
        sol = solve_z(A, list(c))
        if sol.particular is None:
            return None
        cols.append(sol.particular)
    if not cols:
        return IntMatrix.zeros(A.cols, 0)
    return IntMatrix(zip(*cols), cols=len(cols))


def right_inverse(K) -> IntMatrix:
    """``R`` with ``K @ R == I``; requires the row lattice to be saturated."""
    K = as_matrix(K)
    R = solve_matrix_z(K, IntMatrix.identity(K.rows))
    if R is None:
        raise ValueError("rows do not span a saturated lattice")
    return R


def coordinates(basis, vectors) -> list[list[int]]:
    """Integer ``Y`` with ``Y @ basis == vectors`` for row vectors in the
    lattice spanned by the (independent) rows of ``basis``.

    Raises ValueError if some vector is not in the lattice.
    """
    B = [list(r) for r in basis]
    W = [list(r) for r in vectors]
    k = len(B)
    if not W:
        return []
    if k == 0:
        if any(any(w) for w in W):
            raise ValueError("nonzero vector in the zero lattice")
        return [[] for _ in W]
    n = len(B[0])
    cols = independent_rows(IntMatrix([list(c) for c in zip(*B)], cols=k))
    if len(cols) < k:
        _, cols, _ = _rref_exact(B, n)
    # solve B_S^T y^T = w_S^T for all w at once
    aug = [[B[j][c] for j in range(k)] + [w[c] for w in W] for c in cols]
    M, pivots, d = _rref_exact(aug, k + len(W))
    if pivots[:k] != list(range(k)):
        raise ValueError("basis rows are dependent")
    Y = []
    for t in range(len(W)):
        y = []
        for i in range(k):
            q, r = divmod(M[i][k + t], d)
            if r:
                raise ValueError("vector not in the lattice")
            y.append(q)
        Y.append(y)
    back = np.dot(np.array(Y, dtype=object), np.array(B, dtype=object))
    if not np.array_equal(back, np.array(W, dtype=object)):
        raise ValueError("vector not in the lattice")
    return Y


def spans_lattice(vectors, dim: int) -> bool:
    """True iff the integer ``vectors`` generate all of ``Z^dim``."""
    if dim == 0:
        return True
    if isinstance(vectors, np.ndarray) and vectors.dtype == np.int64:
        vecs = vectors
        rows = lambda idx: vecs[idx].tolist()  # noqa: E731
    else:
        vecs = [list(v) for v in vectors]
        rows = lambda idx: [vecs[i] for i in idx]  # noqa: E731
    if len(vecs) < dim:
        return False
    idx = independent_rows(vecs if isinstance(vecs, np.ndarray) else IntMatrix(vecs, cols=dim))
    if len(idx) < dim:
        full = vecs.tolist() if isinstance(vecs, np.ndarray) else vecs
        _, idx, _ = _rref_exact([list(c) for c in zip(*full)], len(full))
        if len(idx) < dim:
            return False
    D = abs(det(rows(idx)))
    if D == 1:
        return True
    # the lattice contains D * Z^dim, so its index divides D and it is all of
    # Z^dim iff it has full rank modulo every prime factor of D
    return all(rank_mod_p(vecs, p) == dim for p in factorint(D))


# ---------------------------------------------------------------------------
# determinants


def det(A) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = as_matrix(A)
    if A.rows != A.cols:
        raise DimensionError("determinant of a non-square matrix")
    n = A.rows
    M = A.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        mk = M[k]
        pk = mk[k]
        for i in range(k + 1, n):
            mi = M[i]
            a = mi[k]
            M[i] = [(pk * mi[j] - a * mk[j]) // prev if j > k else 0 for j in range(n)]
        prev = pk
    return sign * M[n - 1][n - 1] if n else 1


def is_unimodular(A) -> bool:
    A = as_matrix(A)
    if A.rows != A.cols:
        raise DimensionError("unimodularity is only defined for square matrices")
    return abs(det(A)) == 1

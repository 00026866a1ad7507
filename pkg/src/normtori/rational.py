"""Deciding retract and stable rationality of norm one tori.

The torus attached to a transitive group ``G`` with point stabilizer ``H`` has
character lattice ``J = chevalley_module(G)``.  It is retract rational iff the
flabby class of ``J`` is invertible, and stably rational iff that class
vanishes.  :func:`classify` combines group-theoretic shortcuts with direct
lattice computations; every decided verdict names its rule and, for
computations, carries a checkable certificate.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from math import gcd
from typing import Optional, Sequence

import numpy as np
from sympy import factorint, isprime

from .cohom import DEFAULT_H1_CAP, h1, tate_h0
from .flabby import FlabbyResolution, coflabby_surjection, flabby_resolution, minimize_base
from .glattice import (
    GLattice,
    as_array,
    chevalley_module,
    direct_sum,
    dual,
    fixed_sublattice,
    matmul,
    permutation_lattice,
)
from .intlat import IntMatrix, LinearSolution, det, kernel_z, rank_exact, snf, solve_z
from .permgrp import (
    CapError,
    DEFAULT_ORDER_CAP,
    PermGroup,
    SubgroupClassTable,
    all_sylow_cyclic,
    cosets,
    is_cyclic,
    is_nilpotent,
    is_transitive,
    metacyclic_form,
    normal_core,
    odd_cr_c2_form,
    point_stabilizer,
    structure_name,
    subgroup_classes,
    sylow,
)

__all__ = [
    "YES",
    "NO",
    "UNKNOWN",
    "Verdict",
    "ClassifyConfig",
    "ClassificationReport",
    "InvertibilityResult",
    "PossibilitySystem",
    "IsoCertificate",
    "FamilyParams",
    "FamilyError",
    "is_invertible_class",
    "possibility_vectors",
    "search_stably_permutation",
    "verify_certificate",
    "verify_section",
    "classify_galois",
    "classify_sylow_cyclic",
    "nilpotent_rule",
    "sylow_reduction",
    "subgroup_reduction",
    "known_family_rule",
    "psl_family_params",
    "classify",
]

YES, NO, UNKNOWN = "yes", "no", "unknown"


@dataclass
class Verdict:
    value: str = UNKNOWN
    rule: str = ""
    certificate: Optional[dict] = None

    def __post_init__(self):
        if self.value not in (YES, NO, UNKNOWN):
            raise ValueError(f"bad verdict {self.value!r}")
        if self.value != UNKNOWN and not self.rule:
            raise ValueError("a decided verdict needs a rule")

    @property
    def decided(self) -> bool:
        return self.value != UNKNOWN

    def to_dict(self) -> dict:
        out = {"value": self.value, "rule": self.rule}
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        return cls(d["value"], d.get("rule", ""), d.get("certificate"))


# ---------------------------------------------------------------------------
# invertibility


@dataclass
class InvertibilityResult:
    """Outcome of the splitting test; ``section`` is the witness when split."""

    invertible: bool
    section: Optional[np.ndarray]
    surjection_rank: int
    F: GLattice = field(repr=False)
    Q: Optional[GLattice] = field(default=None, repr=False)
    pi: Optional[np.ndarray] = field(default=None, repr=False)

    def __bool__(self) -> bool:
        return self.invertible

    def verify(self) -> bool:
        """Re-check ``section @ pi == I`` and equivariance of the section."""
        if not self.invertible:
            return False
        X, Pi = self.section, self.pi
        if not np.array_equal(matmul(X, Pi), np.eye(self.F.rank, dtype=np.int64)):
            return False
        return all(
            np.array_equal(matmul(A, X), matmul(X, B))
            for A, B in zip(self.F.gen_matrices, self.Q.gen_matrices)
        )

    def to_dict(self) -> dict:
        """Self-contained payload: the section with both actions and ``pi``."""
        out = {"F_rank": self.F.rank, "surjection_rank": self.surjection_rank, "invertible": self.invertible}
        if self.invertible and self.Q is not None:
            out.update(
                section=self.section.tolist(),
                pi=self.pi.tolist(),
                F_actions=[a.tolist() for a in self.F.gen_matrices],
                Q_actions=[a.tolist() for a in self.Q.gen_matrices],
            )
        return out


def verify_section(payload: dict) -> bool:
    """Check a serialized section: ``section @ pi = I`` and equivariance."""
    if payload.get("F_rank") == 0 and payload.get("invertible"):
        return True
    try:
        X = as_array(np.array(payload["section"], dtype=object))
        Pi = as_array(np.array(payload["pi"], dtype=object))
        r = int(payload["F_rank"])
        Fa = [as_array(np.array(a, dtype=object).reshape(r, r)) for a in payload["F_actions"]]
        n = Pi.shape[0]
        Qa = [as_array(np.array(a, dtype=object).reshape(n, n)) for a in payload["Q_actions"]]
    except (KeyError, ValueError, TypeError):
        return False
    if X.shape != (r, n) or Pi.shape != (n, r) or len(Fa) != len(Qa):
        return False
    if not np.array_equal(matmul(X, Pi), np.eye(r, dtype=np.int64)):
        return False
    return all(np.array_equal(matmul(A, X), matmul(X, B)) for A, B in zip(Fa, Qa))


def _inverse_gen_matrices(N: GLattice) -> list[np.ndarray]:
    G = N.group
    inv = G.inverse_indices()
    return [N.matrix(int(inv[G.index_of(g)])) for g in G.gens]


def is_invertible_class(F: GLattice, table: SubgroupClassTable) -> InvertibilityResult:
    """Decide whether ``F`` is a direct summand of a permutation lattice.

    Take a fixed-point surjective ``pi: Q = Z[S] -> F``; its kernel is
    coflabby, so for flabby ``F`` the sequence splits iff ``F`` is
    invertible.  Equivariant maps ``F -> Q`` are determined by one column per
    orbit of ``S``, fixed by the orbit representative's stabilizer; the
    splitting condition ``s @ pi = I`` is then a linear system over Z.
    """
    r = F.rank
    if r == 0:
        return InvertibilityResult(True, np.zeros((0, 0), dtype=np.int64), 0, F)
    base = minimize_base(F, table)[0]
    sur = coflabby_surjection(F, table, base)
    S = base.vectors()
    pos = {v: i for i, v in enumerate(S)}
    mats = F.element_matrices()
    inv_gens = _inverse_gen_matrices(F)
    blocks = []  # per unknown: (r x |S|) contribution to the section matrix
    for orb in base.orbits:
        t0 = np.array(orb[0], dtype=np.int64)
        stab = [i for i, A in enumerate(mats) if np.array_equal(t0 @ A, t0)]
        Hs = F.group.subgroup_by_indices(stab)
        eye = np.eye(r, dtype=np.int64)
        rows = []
        for h in Hs.gens:
            rows.extend(x for x in (F.matrix(h) - eye).tolist() if any(x))
        cols = kernel_z(IntMatrix(rows, cols=r)) if rows else eye.tolist()
        for c in cols:
            # spread c over the orbit: column of t.g is A(g)^-1 applied to column of t
            W = {orb[0]: np.array(c, dtype=object)}
            queue = [orb[0]]
            for t in queue:
                tv = np.array([t], dtype=np.int64)
                for A, Ainv in zip(F.gen_matrices, inv_gens):
                    u = tuple(int(x) for x in matmul(tv, A)[0])
                    if u not in W:
                        W[u] = np.dot(Ainv.astype(object), W[t])
                        queue.append(u)
            X = np.zeros((r, len(S)), dtype=object)
            for t, w in W.items():
                X[:, pos[t]] = w
            blocks.append(X)
    Pi = sur.pi.matrix.astype(object)
    # unknown coefficients a_j with sum a_j X_j Pi = I
    cols = [np.dot(X, Pi).ravel().tolist() for X in blocks]
    A = IntMatrix([list(row) for row in zip(*cols)], cols=len(cols))
    target = np.eye(r, dtype=np.int64).ravel().tolist()
    sol = solve_z(A, target)
    if sol.particular is None:
        return InvertibilityResult(False, None, len(S), F, sur.P, sur.pi.matrix)
    section = np.zeros((r, len(S)), dtype=object)
    for a, X in zip(sol.particular, blocks):
        if a:
            section = section + a * X
    res = InvertibilityResult(True, as_array(section), len(S), F, sur.P, sur.pi.matrix)
    if not res.verify():
        raise ArithmeticError("section failed verification")
    return res


# ---------------------------------------------------------------------------
# necessary conditions for stably permutation


def _orbit_sizes(H: PermGroup, table) -> list[int]:
    G = table.group
    T = G.mult_table()
    n = len(table)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    reps = [G.index_of(r) for r in table.representatives]
    for h in H.gens:
        hi = G.index_of(h)
        for c, rr in enumerate(reps):
            a, b = find(c), find(table.coset_of[int(T[rr, hi])])
            if a != b:
                parent[a] = b
    sizes: dict[int, int] = {}
    for x in range(n):
        sizes[find(x)] = sizes.get(find(x), 0) + 1
    return sorted(sizes.values())


def _primary_counts(divisors: Sequence[int]) -> dict[tuple[int, int], int]:
    """Multiplicities of the cyclic factors ``Z/p^a`` of a finite abelian group."""
    out: dict[tuple[int, int], int] = {}
    for d in divisors:
        for p, a in factorint(d).items():
            out[(p, a)] = out.get((p, a), 0) + 1
    return out


@dataclass
class PossibilitySystem:
    """Linear conditions on multiplicities ``c_K`` of ``Z[G/K]``.

    A solution means ``sum_{c_K > 0} c_K Z[G/K]`` and
    ``sum_{c_K < 0} |c_K| Z[G/K] + F`` share all invariants used here.
    """

    class_orders: list[int]
    class_names: list[str]
    indices: list[int]  # [G:K] per class
    labels: list[str]  # description of each equation
    equations: list[list[int]]
    rhs: list[int]
    solution: Optional[LinearSolution]
    feasible: bool
    witness: Optional[dict] = None
    f_rank: int = 0

    def vector(self, c: Sequence[int]) -> list[int]:
        """Signed vector over classes plus the ``F`` slot (always ``-1``)."""
        return [int(x) for x in c] + [-1]

    def is_solution(self, c: Sequence[int]) -> bool:
        return all(sum(a * x for a, x in zip(row, c)) == b for row, b in zip(self.equations, self.rhs))

    def candidates(self, limit: int = 20, bound: int = 2, max_combos: int = 200000) -> list[list[int]]:
        """Small solutions sorted by the total rank of both sides."""
        if not self.feasible:
            return []
        x0 = self.solution.particular
        K = self.solution.kernel_basis
        k = len(K)
        b = bound
        while k and (2 * b + 1) ** k > max_combos and b > 1:
            b -= 1
        found = {}
        ranges = [range(-b, b + 1)] * k
        count = 0
        for coef in itertools.product(*ranges):
            count += 1
            if count > max_combos:
                break
            c = list(x0)
            for a, v in zip(coef, K):
                if a:
                    c = [x + a * y for x, y in zip(c, v)]
            cost = sum(abs(x) * n for x, n in zip(c, self.indices)) + self.f_rank
            key = tuple(c)
            if key not in found:
                found[key] = cost
        ranked = sorted(found.items(), key=lambda kv: (kv[1], kv[0]))
        return [self.vector(c) for c, _ in ranked[:limit]]

    def shifted(self, delta: Sequence[int], f_rank: int) -> "PossibilitySystem":
        """System of another representative ``F'`` with ``F + P' = F' + P``.

        ``delta`` is the class multiplicity vector of ``P' - P``; every
        invariant used is additive, so the solutions move by ``delta``.
        """
        rhs = [b + sum(a * d for a, d in zip(row, delta)) for row, b in zip(self.equations, self.rhs)]
        sol = self.solution
        if sol is not None and sol.particular is not None:
            sol = LinearSolution([x + d for x, d in zip(sol.particular, delta)], sol.kernel_basis)
        return replace(self, rhs=rhs, solution=sol, f_rank=f_rank)

    def to_dict(self) -> dict:
        return {
            "class_orders": self.class_orders,
            "class_names": self.class_names,
            "feasible": self.feasible,
            "equations": len(self.equations),
            "witness": self.witness,
        }


def _divisibility_witness(A: list[list[int]], b: list[int]) -> Optional[dict]:
    """A row combination ``y`` with ``y A`` integral but ``y b`` not, if any."""
    if not A:
        return None
    D = snf(IntMatrix(A, cols=len(A[0])))
    Ub = [sum(u * x for u, x in zip(row, b)) for row in D.U]
    diag = D.diagonal
    for i, ub in enumerate(Ub):
        d = diag[i] if i < len(diag) else 0
        if d == 0 and ub != 0:
            return {"kind": "rational", "row": list(D.U.row(i))}
        if d > 1 and ub % d:
            return {"kind": "divisibility", "row": list(D.U.row(i)), "modulus": d}
    return None


def _solvable_mod(A: list[list[int]], b: list[int], p: int) -> bool:
    from .intlat import rank_mod_p

    aug = [row + [x] for row, x in zip(A, b)]
    n = len(A[0]) if A else 0
    return rank_mod_p(IntMatrix(A, cols=n), p) == rank_mod_p(IntMatrix(aug, cols=n + 1), p)


def possibility_vectors(
    F: GLattice,
    table: SubgroupClassTable,
    h1_cap: int = DEFAULT_H1_CAP,
    primary: bool = True,
) -> PossibilitySystem:
    """Necessary conditions for ``F`` to be stably permutation.

    For every class representative ``H``: the rank of the fixed sublattice and
    the cyclic factors of ``Ĥ^0(H, -)`` must balance across the relation.  If
    ``primary`` is False only the p-valuations of ``|Ĥ^0|`` are compared.
    """
    G = table.group
    reps = table.representatives
    m = len(reps)
    ctabs = [cosets(G, K) for K in reps]
    indices = [len(t) for t in ctabs]
    labels: list[str] = []
    eqs: list[list[int]] = []
    rhs: list[int] = []
    witness = None
    primes = sorted(factorint(G.order()))
    for hi, H in enumerate(reps):
        orbit_sizes = [_orbit_sizes(H, t) for t in ctabs]
        eqs.append([len(s) for s in orbit_sizes])
        rhs.append(len(fixed_sublattice(F, H)))
        labels.append(f"rank H{hi}")
        if H.order() == 1:
            continue
        hF = tate_h0(F, H)
        if primary:
            perm_counts = [
                _primary_counts([H.order() // s for s in sizes if H.order() // s > 1]) for sizes in orbit_sizes
            ]
            f_counts = _primary_counts(hF.elementary_divisors)
            keys = sorted(set(f_counts) | {k for pc in perm_counts for k in pc})
            for key in keys:
                eqs.append([pc.get(key, 0) for pc in perm_counts])
                rhs.append(f_counts.get(key, 0))
                labels.append(f"H0 H{hi} Z/{key[0]}^{key[1]}")
        else:
            for p in primes:
                row = []
                for sizes in orbit_sizes:
                    row.append(sum(_vp(H.order() // s, p) for s in sizes))
                eqs.append(row)
                rhs.append(_vp(hF.order, p))
                labels.append(f"H0 H{hi} v_{p}")
        if witness is None:
            try:
                if not h1(F, H, h1_cap).is_trivial:
                    witness = {"kind": "h1", "class": hi}
            except CapError:
                pass
    names = table.names()
    base = dict(
        class_orders=table.orders,
        class_names=names,
        indices=indices,
        labels=labels,
        equations=eqs,
        rhs=rhs,
        f_rank=F.rank,
    )
    if witness is not None:
        return PossibilitySystem(solution=None, feasible=False, witness=witness, **base)
    sol = solve_z(IntMatrix(eqs, cols=m), rhs)
    if sol.particular is None:
        witness = _divisibility_witness(eqs, rhs)
        if witness is None:
            raise ArithmeticError("infeasible system without an obstruction witness")
        rational = rank_exact(eqs, m) == rank_exact([r + [x] for r, x in zip(eqs, rhs)], m + 1)
        u = witness["row"]
        uA = [sum(x * row[j] for x, row in zip(u, eqs)) for j in range(m)]
        ub = sum(x * y for x, y in zip(u, rhs))
        if witness["kind"] == "rational":
            ok = not rational and not any(uA) and ub != 0
        else:
            d = witness["modulus"]
            ok = rational and all(x % d == 0 for x in uA) and ub % d != 0
        if not ok:
            raise ArithmeticError("obstruction witness failed its re-check")
        witness["rational_feasible"] = rational
        witness["solvable_mod"] = {str(q): _solvable_mod(eqs, rhs, q) for q in (2, 3, 5)}
        return PossibilitySystem(solution=sol, feasible=False, witness=witness, **base)
    return PossibilitySystem(solution=sol, feasible=True, **base)


def _vp(n: Optional[int], p: int) -> int:
    if not n:
        return 0
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# certificates of stable permutation


@dataclass
class IsoCertificate:
    """Equivariant unimodular ``matrix`` from the left sum to the right sum.

    ``vector`` has one entry per subgroup class plus a final ``F`` slot;
    positive entries give multiplicities on the left, negative ones on the
    right.  The action matrices of both sides on every group generator are
    stored so that the certificate can be checked on its own.
    """

    vector: list[int]
    matrix: np.ndarray
    left_actions: list[np.ndarray]
    right_actions: list[np.ndarray]
    class_orders: list[int] = field(default_factory=list)
    trial: int = -1

    @property
    def left_rank(self) -> int:
        return self.matrix.shape[0]

    @property
    def right_rank(self) -> int:
        return self.matrix.shape[1]

    def to_dict(self) -> dict:
        return {
            "vector": list(self.vector),
            "class_orders": list(self.class_orders),
            "trial": self.trial,
            "matrix": self.matrix.tolist(),
            "left_actions": [a.tolist() for a in self.left_actions],
            "right_actions": [a.tolist() for a in self.right_actions],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IsoCertificate":
        def arr(x, n):
            return as_array(np.array(x, dtype=object).reshape(n, n) if n else np.zeros((0, 0), dtype=np.int64))

        M = as_array(np.array(d["matrix"], dtype=object))
        nl, nr = M.shape
        return cls(
            vector=list(d["vector"]),
            matrix=M,
            left_actions=[arr(a, nl) for a in d["left_actions"]],
            right_actions=[arr(a, nr) for a in d["right_actions"]],
            class_orders=list(d.get("class_orders", [])),
            trial=d.get("trial", -1),
        )


def verify_certificate(cert: IsoCertificate) -> bool:
    """Equivariance on every generator and unimodularity, checked exactly."""
    X = cert.matrix
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        return False
    if len(cert.left_actions) != len(cert.right_actions):
        return False
    for A, B in zip(cert.left_actions, cert.right_actions):
        if A.shape != (X.shape[0],) * 2 or B.shape != (X.shape[1],) * 2:
            return False
        if not np.array_equal(matmul(A, X), matmul(X, B)):
            return False
    return abs(det(X.tolist())) == 1 if X.shape[0] else True


def _sides(F: GLattice, table: SubgroupClassTable, vector: Sequence[int]):
    m = len(table)
    if len(vector) != m + 1 or vector[-1] != -1:
        raise ValueError("vector needs one entry per class and -1 in the F slot")
    G = table.group
    left, right = [], []
    for K, c in zip(table.representatives, vector[:m]):
        if c == 0:
            continue
        P = permutation_lattice(G, K)
        (left if c > 0 else right).extend([(K, P)] * abs(c))
    return left, right


def _hom_from_permutation(K: PermGroup, P: GLattice, R: GLattice) -> list[np.ndarray]:
    """Basis of equivariant maps ``Z[G/K] -> R``: row ``Kx`` is ``v A_R(x)`` for ``v`` in ``R^K``."""
    reps = P.cosets.representatives
    fixed = fixed_sublattice(R, K)
    out = []
    xs = [R.matrix(x) for x in reps]
    for v in fixed:
        row = as_array(np.array([v], dtype=object))
        out.append(np.vstack([matmul(row, A) for A in xs]))
    return out


def search_stably_permutation(
    F: GLattice,
    table: SubgroupClassTable,
    vector: Sequence[int],
    trials: int = 100000,
    seed: int = 0,
    ranges: Sequence[tuple[int, int]] = ((0, 1), (-1, 1), (-2, 2)),
    batch: int = 2000,
) -> Optional[IsoCertificate]:
    """Look for a unimodular equivariant map between the two sides of ``vector``.

    Random integer combinations of a Z-basis of the equivariant maps are
    screened with floating-point determinants and confirmed exactly.  The
    trial budget is split evenly over the coefficient ranges ``(lo, hi)``.  Returns None
    when nothing is found, which proves nothing.
    """
    left, right = _sides(F, table, list(vector))
    nl = sum(P.rank for _, P in left)
    nr = sum(P.rank for _, P in right) + F.rank
    if nl != nr:
        raise ValueError(f"rank mismatch: {nl} on the left, {nr} on the right")
    R = direct_sum([P for _, P in right] + [F]) if right else F
    L = direct_sum([P for _, P in left]) if left else None
    if L is None:
        return None
    # hom basis, block by block along the left summands
    basis: list[np.ndarray] = []
    offset = 0
    for K, P in left:
        for blk in _hom_from_permutation(K, P, R):
            X = np.zeros((nl, nr), dtype=np.int64)
            X[offset : offset + P.rank, :] = blk
            basis.append(X)
        offset += P.rank
    if not basis:
        return None
    B = np.stack(basis).astype(np.float64)  # (k, n, n)
    k = len(basis)
    rng = np.random.default_rng(seed)
    per_range = max(1, trials // len(ranges))
    trial = 0
    for lo, hi in ranges:
        done = 0
        while done < per_range:
            size = min(batch, per_range - done)
            coefs = rng.integers(lo, hi + 1, size=(size, k))
            mats = np.tensordot(coefs.astype(np.float64), B, axes=(1, 0))
            with np.errstate(all="ignore"):
                sign, logdet = np.linalg.slogdet(mats)
            hits = np.nonzero((sign != 0) & (np.abs(logdet) < 1e-6))[0]
            for h in hits:
                X = np.zeros((nl, nr), dtype=object)
                for a, M in zip(coefs[h].tolist(), basis):
                    if a:
                        X = X + a * M.astype(object)
                X = as_array(X)
                if abs(det(X.tolist())) == 1:
                    cert = IsoCertificate(
                        vector=list(vector),
                        matrix=X,
                        left_actions=list(L.gen_matrices),
                        right_actions=list(R.gen_matrices),
                        class_orders=table.orders,
                        trial=trial + int(h),
                    )
                    if verify_certificate(cert):
                        return cert
            done += size
            trial += size
    return None


# ---------------------------------------------------------------------------
# theorem rules


def classify_galois(G: PermGroup) -> tuple[Verdict, Verdict]:
    """Regular action (trivial stabilizer)."""
    if all_sylow_cyclic(G):
        retract = Verdict(YES, "galois-sylow-cyclic")
    else:
        retract = Verdict(NO, "galois-sylow-noncyclic")
    form = metacyclic_form(G) if retract.value == YES else None
    if form is not None:
        m, d, r = form
        stably = Verdict(YES, "galois-metacyclic", {"m": m, "d": d, "r": r})
    else:
        stably = Verdict(NO, "galois-not-metacyclic")
    return retract, stably


def classify_sylow_cyclic(G: PermGroup, H: PermGroup) -> tuple[Verdict, Verdict]:
    """All Sylow subgroups cyclic, nontrivial stabilizer."""
    if H.order() == 1 or not all_sylow_cyclic(G):
        raise ValueError("precondition: nontrivial stabilizer and all Sylow subgroups cyclic")
    retract = Verdict(YES, "sylow-cyclic")
    if odd_cr_c2_form(G, H):
        return retract, Verdict(YES, "sylow-cyclic-odd-dihedral")
    return retract, Verdict(NO, "sylow-cyclic-not-odd-dihedral")


def nilpotent_rule(G: PermGroup, H: PermGroup) -> Verdict:
    if H.order() > 1 and is_nilpotent(G):
        return Verdict(NO, "nilpotent")
    return Verdict()


def sylow_reduction(G: PermGroup, H: Optional[PermGroup] = None) -> Verdict:
    """A transitive non-cyclic Sylow subgroup rules out retract rationality."""
    for p in sorted(factorint(G.order())):
        P = sylow(G, p)
        if is_transitive(P) and not is_cyclic(P):
            return Verdict(NO, "sylow-reduction", {"prime": p, "sylow_order": P.order()})
    return Verdict()


def known_family_rule(G: PermGroup, H: Optional[PermGroup] = None) -> tuple[Verdict, Verdict]:
    """Full symmetric and alternating groups in their natural action."""
    kind = G.giant_type()
    n = G.degree
    if kind is None or n < 3:
        return Verdict(), Verdict()
    prime = isprime(n)
    if kind == "S":
        retract = Verdict(YES if prime else NO, "symmetric-family")
        stably = Verdict(YES if n == 3 else NO, "symmetric-family")
    else:
        retract = Verdict(YES if prime else NO, "alternating-family")
        stably = Verdict(YES if n == 5 else NO, "alternating-family")
    return retract, stably


def _theorem_rules(G: PermGroup, H: PermGroup, trail: list) -> tuple[Verdict, Verdict]:
    """Rules that need no lattice computation, in pipeline order."""
    if G.giant_type() is not None and not G.is_enumerable():
        r, s = known_family_rule(G, H)
        trail.append({"rule": "known-family", "retract": r.value, "stably": s.value})
        return r, s
    if H.order() == 1:
        r, s = classify_galois(G)
        trail.append({"rule": "galois", "retract": r.value, "stably": s.value})
        return r, s
    v = nilpotent_rule(G, H)
    trail.append({"rule": "nilpotent", "retract": v.value})
    if v.decided:
        return v, Verdict(NO, v.rule)
    if all_sylow_cyclic(G):
        r, s = classify_sylow_cyclic(G, H)
        trail.append({"rule": "sylow-cyclic", "retract": r.value, "stably": s.value})
        return r, s
    trail.append({"rule": "sylow-cyclic", "retract": UNKNOWN})
    r, s = known_family_rule(G, H)
    trail.append({"rule": "known-family", "retract": r.value, "stably": s.value})
    return r, s


def subgroup_reduction(
    G: PermGroup, H: PermGroup, candidates: Sequence[PermGroup]
) -> tuple[Verdict, Verdict, list]:
    """Propagate negative verdicts from transitive subgroups upward."""
    retract, stably = Verdict(), Verdict()
    notes = []
    for K in candidates:
        if K.order() == G.order() or not is_transitive(K):
            continue
        HK = point_stabilizer(K, 1)
        sub_trail: list = []
        r, s = _theorem_rules(K, HK, sub_trail)
        label = f"{structure_name(K)} (order {K.order()})"
        notes.append({"subgroup": label, "retract": r.value, "stably": s.value})
        if r.value == NO and not retract.decided:
            retract = Verdict(NO, "subgroup-reduction", {"subgroup": label, "generators": _gens(K)})
        if (s.value == NO or r.value == NO) and not stably.decided:
            stably = Verdict(NO, "subgroup-reduction", {"subgroup": label, "generators": _gens(K)})
        if retract.decided:
            break
    return retract, stably, notes


def _gens(K: PermGroup) -> list[str]:
    return [str(g) for g in K.gens]


# ---------------------------------------------------------------------------
# family arithmetic


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyParams:
    d: int
    q: int
    ell: int
    e: int
    p: int
    order_G: int
    order_H: int

    def to_dict(self) -> dict:
        return dict(d=self.d, q=self.q, ell=self.ell, e=self.e, p=self.p, order_G=self.order_G, order_H=self.order_H)


def psl_family_params(d: int, q: int) -> FamilyParams:
    """Arithmetic of ``PSL_d(F_q)`` acting on the ``p = (q^d - 1)/(q - 1)``
    points of projective space, when ``p`` is prime."""
    if d < 2:
        raise FamilyError("d must be at least 2")
    if not isprime(d):
        raise FamilyError(f"d composite: {d}")
    f = factorint(q)
    if q < 2 or len(f) != 1:
        raise FamilyError(f"q = {q} is not a prime power")
    (ell, e), = f.items()
    p = (q**d - 1) // (q - 1)
    if not isprime(p):
        raise FamilyError(f"p not prime: (q^d - 1)/(q - 1) = {p}")
    if gcd(d, q - 1) != 1:
        raise FamilyError(f"gcd(d, q - 1) = {gcd(d, q - 1)} is not 1")
    order = q ** (d * (d - 1) // 2)
    for i in range(2, d + 1):
        order *= q**i - 1
    order //= gcd(d, q - 1)
    if order % p or (order // p - d) % p:
        raise FamilyError("|G|/p is not congruent to d modulo p")
    return FamilyParams(d, q, ell, e, p, order, p * d)


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class ClassifyConfig:
    seed: int = 0
    trials: int = 100000
    order_cap: int = DEFAULT_ORDER_CAP
    h1_cap: int = DEFAULT_H1_CAP
    skip_direct: bool = False
    max_vectors: int = 3
    max_side_rank: int = 160
    restarts: int = 16
    max_bases: int = 3


@dataclass
class ClassificationReport:
    group: dict
    stabilizer: dict
    retract: Verdict
    stably: Verdict
    trail: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "stabilizer": self.stabilizer,
            "retract": self.retract.to_dict(),
            "stably": self.stably.to_dict(),
            "trail": self.trail,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClassificationReport":
        return cls(d["group"], d["stabilizer"], Verdict.from_dict(d["retract"]), Verdict.from_dict(d["stably"]), d["trail"])

    @property
    def decided(self) -> bool:
        return self.retract.decided and self.stably.decided

    def summary(self) -> str:
        if self.stably.value == YES:
            return "stably k-rational"
        if self.retract.value == YES and self.stably.value == NO:
            return "not stably but retract k-rational"
        if self.retract.value == NO:
            return "not retract k-rational"
        if self.retract.value == YES:
            return "retract k-rational, stable rationality unknown"
        return "unknown"


def _close(retract: Verdict, stably: Verdict) -> tuple[Verdict, Verdict]:
    if stably.value == YES and retract.value != YES:
        if retract.value == NO:
            raise ArithmeticError("contradictory verdicts")
        retract = Verdict(YES, "closure: stably rational implies retract rational")
    if retract.value == NO and stably.value != NO:
        if stably.value == YES:
            raise ArithmeticError("contradictory verdicts")
        stably = Verdict(NO, "closure: not retract rational implies not stably rational")
    return retract, stably


def _merge(current: Verdict, new: Verdict) -> Verdict:
    if not new.decided:
        return current
    if current.decided and current.value != new.value:
        raise ArithmeticError(f"rules disagree: {current.rule} vs {new.rule}")
    return current if current.decided else new


def _describe(G: PermGroup) -> dict:
    return {
        "name": G.name,
        "degree": G.degree,
        "order": G.order(),
        "generators": _gens(G),
        "structure": structure_name(G) if G.is_enumerable() or G.giant_type() else None,
    }


def classify(G: PermGroup, H: Optional[PermGroup] = None, config: Optional[ClassifyConfig] = None) -> ClassificationReport:
    """Decide retract and stable rationality of the norm one torus of ``(G, H)``."""
    cfg = config or ClassifyConfig()
    if not is_transitive(G):
        raise ValueError("G must be transitive")
    G.order_cap = max(G.order_cap, cfg.order_cap)
    trail: list = []
    giant_only = G.giant_type() is not None and not G.is_enumerable()
    if H is None:
        H = point_stabilizer(G, 1) if not giant_only else None
    elif normal_core(G, H).order() != 1:
        raise ValueError("the stabilizer must have trivial normal core")
    stab_desc = {"order": G.order() // G.degree if H is None else H.order(), "generators": _gens(H) if H is not None else None}

    def report(r, s):
        r, s = _close(r, s)
        return ClassificationReport(_describe(G), stab_desc, r, s, trail)

    if giant_only:
        r, s = known_family_rule(G, None)
        trail.append({"rule": "known-family", "retract": r.value, "stably": s.value})
        return report(r, s)

    # (1)-(4)
    retract, stably = _theorem_rules(G, H, trail)
    retract, stably = _close(retract, stably)
    if retract.decided and stably.decided:
        return report(retract, stably)

    # (5)
    if not retract.decided:
        v = sylow_reduction(G, H)
        trail.append({"rule": "sylow-reduction", "retract": v.value})
        retract = _merge(retract, v)
        retract, stably = _close(retract, stably)
        if retract.decided and stably.decided:
            return report(retract, stably)

    # (6)
    try:
        table = subgroup_classes(G, cfg.order_cap)
    except CapError as exc:
        trail.append({"rule": "subgroup-classes", "error": str(exc)})
        return report(retract, stably)
    cands = [table.representatives[i] for i in table.transitive_classes()]
    r6, s6, notes = subgroup_reduction(G, H, cands)
    trail.append({"rule": "subgroup-reduction", "retract": r6.value, "stably": s6.value, "checked": notes})
    retract = _merge(retract, r6)
    stably = _merge(stably, s6)
    retract, stably = _close(retract, stably)
    if (retract.decided and stably.decided) or cfg.skip_direct:
        return report(retract, stably)

    # (7)
    try:
        J = chevalley_module(G)
        resolutions = _resolutions(J, table, cfg)
        res = resolutions[0]
        F = res.F
        trail.append(
            {
                "rule": "flabby-resolution",
                "P_rank": res.P.rank,
                "F_rank": F.rank,
                "alternatives": [{"P_rank": r.P.rank, "F_rank": r.F.rank, "summands": r.summands} for r in resolutions[1:]],
            }
        )
        if not retract.decided:
            inv = is_invertible_class(F, table)
            retract = Verdict(YES if inv.invertible else NO, "invertibility", inv.to_dict())
            trail.append({"rule": "invertibility", "retract": retract.value})
            retract, stably = _close(retract, stably)
        if not stably.decided:
            stably = _stably_by_computation(resolutions, table, cfg, trail)
    except CapError as exc:
        trail.append({"rule": "direct", "error": str(exc)})
    return report(retract, stably)


def _resolutions(J: GLattice, table: SubgroupClassTable, cfg: ClassifyConfig) -> list[FlabbyResolution]:
    """Resolutions from the smallest bases found, one per stabilizer signature."""
    out: list[FlabbyResolution] = []
    seen = set()
    for base in minimize_base(dual(J), table, restarts=cfg.restarts, seed=cfg.seed):
        res = flabby_resolution(J, table, base)
        key = tuple(res.summands)
        if key in seen:
            continue
        seen.add(key)
        out.append(res)
        if len(out) >= max(1, cfg.max_bases):
            break
    return out


def _multiplicities(res: FlabbyResolution, m: int) -> list[int]:
    out = [0] * m
    for i, c in res.summands:
        out[i] += c
    return out


def _stably_by_computation(
    resolutions: Sequence[FlabbyResolution], table: SubgroupClassTable, cfg: ClassifyConfig, trail: list
) -> Verdict:
    """Possibility equations on the first representative, certificate search on all.

    Every representative of the flabby class satisfies the same equations, so
    infeasibility for one of them is conclusive.  A certificate may exist for
    one representative and be hard to find for another.
    """
    first = resolutions[0]
    F = first.F
    if F.rank == 0:
        return Verdict(YES, "flabby-class-zero")
    system = possibility_vectors(F, table, cfg.h1_cap)
    trail.append({"rule": "possibility", **system.to_dict()})
    if not system.feasible:
        return Verdict(NO, "possibility", {"witness": system.witness})
    m = len(table)
    base_counts = _multiplicities(first, m)
    queues = [(0, F, system.candidates(limit=cfg.max_vectors))]
    for j, res in enumerate(resolutions[1:], 1):
        delta = [a - b for a, b in zip(_multiplicities(res, m), base_counts)]
        other = system.shifted(delta, res.F.rank)
        queues.append((j, res.F, other.candidates(limit=cfg.max_vectors)))
    k = 0
    # best vector of every representative first, then the runners-up
    for rnd in range(max(len(q) for _, _, q in queues)):
        for j, E, vectors in queues:
            if rnd >= len(vectors):
                continue
            vec = vectors[rnd]
            side = sum(c * n for c, n in zip(vec, system.indices) if c > 0)
            if side > cfg.max_side_rank:
                trail.append({"rule": "certificate-search", "representative": j, "F_rank": E.rank, "vector": vec, "skipped": f"side rank {side}"})
                continue
            cert = search_stably_permutation(E, table, vec, trials=cfg.trials, seed=cfg.seed + k)
            k += 1
            trail.append({"rule": "certificate-search", "representative": j, "F_rank": E.rank, "vector": vec, "found": cert is not None})
            if cert is not None:
                return Verdict(YES, "certificate", cert.to_dict())
    return Verdict()

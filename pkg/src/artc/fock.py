"""Truncated Fock representation on trace-word basis vectors.

The basis is every normal-form word of length <= L; V_s sends e[w] to
e[s w] and kills words already of length L. Every generator is a partial
permutation matrix with integer entries, so all operator identities are
checked as exact integer equalities. Truncation only corrupts columns of
long words: a check involving an operator word of length m is evaluated on
the columns of words of length <= L - m, where it is exact.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import PreconditionError, ResourceLimitError
from .graph import Graph, RemovalStep
from .words import ReducedForm, StarWord, _nf, _trace_words

DEFAULT_LENGTH = 6
DEFAULT_MAX_BASIS = 200_000


def max_basis() -> int:
    env = os.environ.get("ARTC_MAX_BASIS")
    return int(env) if env else DEFAULT_MAX_BASIS


@dataclass
class FockBasis:
    graph: Graph
    max_len: int
    words: list[tuple[int, ...]]
    index: dict[tuple[int, ...], int]
    # succ[s][col] = row of e[s w] for w = words[col], or -1 past the truncation
    succ: list[np.ndarray] = field(repr=False)

    def __len__(self) -> int:
        return len(self.words)

    def interior(self, budget: int) -> np.ndarray:
        """Column indices of words with length <= budget."""
        return np.array([i for i, w in enumerate(self.words) if len(w) <= budget], dtype=np.int64)


def build_basis(g: Graph, L: int, cap: int | None = None) -> FockBasis:
    if L < 0:
        raise PreconditionError("length bound must be nonnegative")
    cap = max_basis() if cap is None else cap
    adj = g.adj
    words: list[tuple[int, ...]] = [()]
    index = {(): 0}
    level = [()]
    edges: list[tuple[int, int, tuple[int, ...]]] = []  # (s, col, image word)
    for _ in range(L):
        new = {}
        for w in level:
            col = index[w]
            for s in range(g.n):
                u = _nf((s,) + w, adj)
                if u not in index:
                    new[u] = None
                edges.append((s, col, u))
        ordered = sorted(new)
        if len(words) + len(ordered) > cap:
            raise ResourceLimitError(
                f"Fock basis exceeds {cap} words at length {len(level[0]) + 1} "
                "(set ARTC_MAX_BASIS to raise the cap)"
            )
        for u in ordered:
            index[u] = len(words)
            words.append(u)
        level = ordered
    succ = [np.full(len(words), -1, dtype=np.int64) for _ in range(g.n)]
    for s, col, u in edges:
        succ[s][col] = index[u]
    return FockBasis(g, L, words, index, succ)


class SparseOperator:
    """Integer matrix on the truncated basis (CSR, int64)."""

    __slots__ = ("m",)

    def __init__(self, m):
        self.m = sp.csr_array(m, dtype=np.int64)

    @classmethod
    def identity(cls, dim: int) -> SparseOperator:
        return cls(sp.identity(dim, dtype=np.int64, format="csr"))

    @classmethod
    def zero(cls, dim: int) -> SparseOperator:
        return cls(sp.csr_array((dim, dim), dtype=np.int64))

    @classmethod
    def projection(cls, dim: int, indices: Iterable[int]) -> SparseOperator:
        d = np.zeros(dim, dtype=np.int64)
        d[list(indices)] = 1
        return cls(sp.diags_array(d, format="csr", dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.m.shape[0]

    def __matmul__(self, other: SparseOperator) -> SparseOperator:
        return SparseOperator(self.m @ other.m)

    def __add__(self, other: SparseOperator) -> SparseOperator:
        return SparseOperator(self.m + other.m)

    def __sub__(self, other: SparseOperator) -> SparseOperator:
        return SparseOperator(self.m - other.m)

    def __neg__(self) -> SparseOperator:
        return SparseOperator(-self.m)

    @property
    def T(self) -> SparseOperator:
        return SparseOperator(self.m.T)

    def adjoint(self) -> SparseOperator:
        return self.T

    def columns(self, cols: np.ndarray):
        return self.m[:, cols]

    def max_abs(self, cols: np.ndarray | None = None) -> int:
        m = self.m if cols is None else self.m[:, cols]
        m = sp.csr_array(m)
        m.eliminate_zeros()
        return int(abs(m.data).max()) if m.nnz else 0

    def entries(self) -> dict[tuple[int, int], int]:
        c = self.m.tocoo()
        return {(int(i), int(j)): int(v) for i, j, v in zip(c.row, c.col, c.data) if v}

    def is_partial_permutation(self) -> bool:
        m = sp.csr_array(self.m)
        m.eliminate_zeros()
        if m.nnz and not (m.data == 1).all():
            return False
        return bool((np.diff(m.indptr) <= 1).all() and (np.bincount(m.indices, minlength=m.shape[1]) <= 1).all())

    def rank(self) -> int:
        """Exact rank over the rationals."""
        m = sp.csr_array(self.m)
        m.eliminate_zeros()
        rows_nnz = np.diff(m.indptr)
        cols_nnz = np.bincount(m.indices, minlength=m.shape[1])
        if (rows_nnz <= 1).all() and (cols_nnz <= 1).all():
            return int(m.nnz)  # monomial pattern: one pivot per nonzero
        rows = np.flatnonzero(rows_nnz)
        cols = np.flatnonzero(cols_nnz)
        dense = m[rows][:, cols].toarray()
        return _bareiss_rank([[int(x) for x in r] for r in dense])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseOperator):
            return NotImplemented
        return self.m.shape == other.m.shape and (self.m != other.m).nnz == 0


def _bareiss_rank(a: list[list[int]]) -> int:
    rows = len(a)
    cols = len(a[0]) if a else 0
    rank = 0
    prev = 1
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, rows):
            f = a[r][c]
            a[r] = [(p * a[r][k] - f * a[rank][k]) // prev for k in range(cols)]
        prev = p
        rank += 1
        if rank == rows:
            break
    return rank


def generator_matrix(s: int, basis: FockBasis) -> SparseOperator:
    if not 0 <= s < basis.graph.n:
        raise PreconditionError(f"vertex {s} out of range")
    succ = basis.succ[s]
    cols = np.flatnonzero(succ >= 0)
    n = len(basis)
    m = sp.csr_array((np.ones(len(cols), dtype=np.int64), (succ[cols], cols)), shape=(n, n))
    return SparseOperator(m)


class Representation:
    """Generator matrices for a basis, built once and cached."""

    def __init__(self, basis: FockBasis):
        self.basis = basis
        self.V = [generator_matrix(s, basis) for s in range(basis.graph.n)]
        self.Vt = [v.T for v in self.V]
        self.I = SparseOperator.identity(len(basis))

    def range_projection(self, s: int) -> SparseOperator:
        return self.V[s] @ self.Vt[s]

    def defect(self, s: int) -> SparseOperator:
        return self.I - self.range_projection(s)

    def defect_product(self, vertices: Iterable[int]) -> SparseOperator:
        out = self.I
        for s in vertices:
            out = out @ self.defect(s)
        return out

    def word(self, w: StarWord) -> SparseOperator:
        out = self.I
        for s, star in w.factors:
            out = out @ (self.Vt[s] if star else self.V[s])
        return out

    def reduced(self, r: ReducedForm) -> SparseOperator:
        if r.is_zero:
            return SparseOperator.zero(len(self.basis))
        return self.word(r.as_star_word())

    def vacuum(self) -> SparseOperator:
        return SparseOperator.projection(len(self.basis), [0])


@dataclass(frozen=True)
class CheckResult:
    name: str
    subspace: str
    residual: int

    @property
    def passed(self) -> bool:
        return self.residual == 0

    def to_json(self) -> dict:
        return {"name": self.name, "subspace": self.subspace, "residual": self.residual, "passed": self.passed}


@dataclass
class RelationReport:
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> int:
        return max((c.residual for c in self.checks), default=0)

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.checks]


def check_relations(g: Graph, L: int, claimed: Graph | None = None,
                    rep: Representation | None = None) -> RelationReport:
    """Isometry, commutation and orthogonal-range relations on words of length <= L - 2.

    The representation is built from ``g``; relations are asserted according to
    ``claimed`` (default ``g``). Passing a different graph there is how the
    harness is shown to detect a wrong adjacency.
    """
    if L < 3:
        raise PreconditionError("relation checks need L >= 3")
    claimed = g if claimed is None else claimed
    if claimed.n != g.n:
        raise ValueError("claimed graph must have the same vertex count")
    rep = rep or Representation(build_basis(g, L))
    cols = rep.basis.interior(L - 2)
    sub = f"len<={L - 2}"
    lab = g.labels
    checks = []
    for s in range(g.n):
        checks.append(CheckResult(f"isometry V_{lab[s]}*V_{lab[s]} = I", sub,
                                  (rep.Vt[s] @ rep.V[s] - rep.I).max_abs(cols)))
    for s in range(g.n):
        for t in range(g.n):
            if s == t:
                continue
            if claimed.adjacent(s, t):
                if s < t:
                    checks.append(CheckResult(f"commute V_{lab[s]}V_{lab[t]} = V_{lab[t]}V_{lab[s]}", sub,
                                              (rep.V[s] @ rep.V[t] - rep.V[t] @ rep.V[s]).max_abs(cols)))
                checks.append(CheckResult(f"*-commute V_{lab[s]}*V_{lab[t]} = V_{lab[t]}V_{lab[s]}*", sub,
                                          (rep.Vt[s] @ rep.V[t] - rep.V[t] @ rep.Vt[s]).max_abs(cols)))
            else:
                checks.append(CheckResult(f"orthogonal V_{lab[s]}*V_{lab[t]} = 0", sub,
                                          (rep.Vt[s] @ rep.V[t]).max_abs(cols)))
    return RelationReport(checks)


def vacuum_rank(g: Graph, L: int, rep: Representation | None = None) -> int:
    """Rank of the product of all defect projections I - V_s V_s* (expected: 1)."""
    if L < 1:
        raise PreconditionError("vacuum rank needs L >= 1")
    rep = rep or Representation(build_basis(g, L))
    return rep.defect_product(range(g.n)).rank()


def eq6_check(g: Graph, removal: RemovalStep, L: int, neighbors: Sequence[int] | None = None,
              rep: Representation | None = None) -> CheckResult:
    """Defect-product identity for a removal step, corrected by the vacuum projection.

    With V the removed vertex's isometry and V_1..V_k its neighbours,
    prod_{s != v}(I - V_s V_s*) - V prod_{i<=k}(I - V_i V_i*) V* equals the
    projection onto e[empty] in the Toeplitz representation; the difference
    vanishes in the boundary quotient. ``neighbors`` (indices into ``g``)
    overrides the neighbour set for negative controls.
    """
    if L < 2:
        raise PreconditionError("defect-product check needs L >= 2")
    v = removal.removed_vertex
    if neighbors is None:
        neighbors = [i for i in range(g.n) if g.adjacent(v, i)]
    rep = rep or Representation(build_basis(g, L))
    lhs = rep.defect_product(i for i in range(g.n) if i != v)
    rhs = rep.V[v] @ rep.defect_product(neighbors) @ rep.Vt[v]
    cols = rep.basis.interior(L - 2)
    return CheckResult(f"defect product, removal {g.labels[v]} (k={len(neighbors)})", f"len<={L - 2}",
                       (lhs - rhs - rep.vacuum()).max_abs(cols))


# -- lazy column action, for words too long to materialise ------------------


def apply_token(word: tuple[int, ...], token: tuple[int, bool], adj: Sequence[int], L: int) -> tuple[int, ...] | None:
    """Column map of one truncated generator (or its transpose); None is the zero vector."""
    s, star = token
    if not star:
        return None if len(word) >= L else _nf((s,) + word, adj)
    prefix = 0
    for pos, a in enumerate(word):
        if a == s:
            if prefix & ~adj[s]:
                return None
            return _nf(word[:pos] + word[pos + 1:], adj)
        prefix |= 1 << a
    return None


def apply_word(w: StarWord, column: tuple[int, ...], adj: Sequence[int], L: int) -> tuple[int, ...] | None:
    """Image of e[column] under the product of truncated generators (rightmost first)."""
    u = column
    for token in reversed(w.factors):
        u = apply_token(u, token, adj, L)
        if u is None:
            return None
    return u


def word_oracle(w: StarWord, r: ReducedForm, g: Graph, L: int | None = None,
                columns: Iterable[Sequence[int]] | None = None) -> bool:
    """Truncated-Fock matrix of ``w`` equals that of ``r`` on the safe subspace.

    Columns default to every basis word of length <= L - |w|; an explicit
    column list must stay inside that subspace. Columns are evaluated one at
    a time, so the full truncated basis is never materialised.
    """
    L = len(w) + 2 if L is None else L
    if L < len(w) + 2:
        raise PreconditionError("word oracle needs L >= |w| + 2")
    budget = L - len(w)
    adj = g.adj
    if columns is None:
        cols = _trace_words(range(g.n), adj, budget)
        if len(cols) > max_basis():
            raise ResourceLimitError("oracle subspace exceeds the basis cap")
    else:
        cols = [_nf(tuple(c), adj) for c in columns]
        if any(len(c) > budget for c in cols):
            raise PreconditionError(f"oracle columns must have length <= {budget}")
    rw = None if r.is_zero else r.as_star_word()
    for c in cols:
        lhs = apply_word(w, c, adj, L)
        rhs = None if rw is None else apply_word(rw, c, adj, L)
        if lhs != rhs:
            return False
    return True

"""Graph Euler characteristic.

chi(G) = 1 - sum_j (-1)^(j-1) N_j, where N_j counts the complete subgraphs
of G on j vertices. Two routes are provided: direct clique counting, and the
vertex-deletion recursion chi(G) = chi(G') - chi(G_k), where G' is G minus a
vertex s chosen so that the complement stays connected and G_k is the
subgraph induced on the neighbours of s.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .errors import CheckedOverflowError, PreconditionError, ResourceLimitError, VerificationError
from .graph import Graph, JoinDecomposition, _complement_connected, _dfs_tree_leaf

DEFAULT_MAX_VERTICES = 24
INT64_MAX = (1 << 63) - 1


def _checked(x: int) -> int:
    if not -INT64_MAX - 1 <= x <= INT64_MAX:
        raise CheckedOverflowError(f"value {x} does not fit in a signed 64-bit integer")
    return x


@dataclass(frozen=True)
class CliqueProfile:
    """``counts[j-1]`` is the number of complete subgraphs on ``j`` vertices."""

    counts: tuple[int, ...]

    def __getitem__(self, j: int) -> int:
        # 1-based, zero past the clique number
        if j < 1:
            raise IndexError("clique sizes start at 1")
        return self.counts[j - 1] if j <= len(self.counts) else 0

    @property
    def clique_number(self) -> int:
        return len(self.counts)

    def alternating_sum(self) -> int:
        return sum(c if j % 2 == 0 else -c for j, c in enumerate(self.counts))


@dataclass(frozen=True)
class EulerResult:
    chi: int
    method: str
    profile: CliqueProfile | None = None
    # recursive route: one (removed label, chi(G'), chi(G_k)) triple per level, outermost first
    steps: tuple[tuple[str, int, int], ...] = field(default=())


def _count_cliques(adj, within: int) -> list[int]:
    """Counts of all cliques inside the vertex set ``within``, indexed by size - 1.

    Include/exclude branching over candidate sets. When the candidate set is
    itself complete, every subset extends the current clique, so the whole
    subtree is added as binomial coefficients instead of being walked.
    """
    counts = [0] * (bin(within).count("1") + 1)  # counts[j] = cliques on j vertices

    def expand(cand: int, depth: int):
        # depth = size of the clique built so far
        m = cand
        complete = True
        while m:
            low = m & -m
            m ^= low
            if (cand & ~low) & ~adj[low.bit_length() - 1]:
                complete = False
                break
        if complete:
            c = bin(cand).count("1")
            for j in range(1, c + 1):
                counts[depth + j] += comb(c, j)
            return
        rest = cand
        while rest:
            low = rest & -rest
            rest ^= low
            counts[depth + 1] += 1
            nxt = rest & adj[low.bit_length() - 1]
            if nxt:
                expand(nxt, depth + 1)

    if within:
        expand(within, 0)
    while len(counts) > 1 and not counts[-1]:
        counts.pop()
    return counts[1:]


def clique_counts(g: Graph, max_vertices: int = DEFAULT_MAX_VERTICES) -> CliqueProfile:
    if g.n > max_vertices:
        raise ResourceLimitError(
            f"graph has {g.n} vertices; clique enumeration bound is {max_vertices}"
        )
    counts = _count_cliques(g.adj, (1 << g.n) - 1)
    return CliqueProfile(tuple(_checked(c) for c in counts))


def chi_direct(g: Graph, max_vertices: int = DEFAULT_MAX_VERTICES) -> EulerResult:
    profile = clique_counts(g, max_vertices)
    return EulerResult(chi=_checked(1 - profile.alternating_sum()), method="direct", profile=profile)


def _chi_within(adj, within: int) -> int:
    counts = _count_cliques(adj, within)
    return 1 - sum(c if j % 2 == 0 else -c for j, c in enumerate(counts))


def _delete_vertex(adj: tuple[int, ...], v: int) -> tuple[int, ...]:
    low = (1 << v) - 1
    out = []
    for u, a in enumerate(adj):
        if u != v:
            out.append((a & low) | ((a >> (v + 1)) << v))
    return tuple(out)


def chi_recursive(g: Graph, max_vertices: int = DEFAULT_MAX_VERTICES) -> EulerResult:
    """chi via repeated vertex deletion down to the two-vertex edgeless base case.

    chi(G_k) is evaluated directly: the neighbourhood graph need not have a
    connected complement, so the recursion does not apply to it.
    """
    if g.n < 2:
        raise PreconditionError("recursive chi needs at least 2 vertices")
    if g.n > max_vertices:
        raise ResourceLimitError(
            f"graph has {g.n} vertices; clique enumeration bound is {max_vertices}"
        )
    if not _complement_connected(g.adj, g.n):
        raise PreconditionError("recursive chi needs a connected complement (use join factors)")
    labels = list(g.labels)
    adj = g.adj
    n = g.n
    levels = []
    while n > 2:
        v = _dfs_tree_leaf(adj, n)
        levels.append((labels.pop(v), _chi_within(adj, adj[v])))
        adj = _delete_vertex(adj, v)
        n -= 1
    # two vertices, connected complement: the edgeless pair
    chi = -1
    steps = []
    for label, chi_k in reversed(levels):
        steps.append((label, chi, chi_k))
        chi = _checked(chi - chi_k)
    return EulerResult(chi=chi, method="recursive", steps=tuple(reversed(steps)))


def chi_of_join_factors(d: JoinDecomposition, max_vertices: int = DEFAULT_MAX_VERTICES) -> list[EulerResult]:
    """Direct chi of each join factor, cross-checked against the recursion."""
    out = []
    for f in d.factors:
        direct = chi_direct(f, max_vertices)
        rec = chi_recursive(f, max_vertices)
        if direct.chi != rec.chi:
            raise VerificationError(
                f"chi mismatch on factor {list(f.labels)}: direct {direct.chi}, recursive {rec.chi}"
            )
        out.append(direct)
    return out

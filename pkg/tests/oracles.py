"""Independent brute-force oracles used by the tests.

None of these call into the library's algorithms; they only share the Graph
container for convenience.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import networkx as nx
import numpy as np

from artc.graph import Graph


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from((i, j) for i in range(g.n) for j in range(i + 1, g.n) if g.adj[i] >> j & 1)
    return h


def from_nx(h: nx.Graph, labels=None) -> Graph:
    nodes = list(h.nodes())
    labels = labels or [str(i + 1) for i in range(len(nodes))]
    pos = {v: i for i, v in enumerate(nodes)}
    return Graph.from_edges(labels, [(labels[pos[u]], labels[pos[v]]) for u, v in h.edges()])


def complement_is_connected(g: Graph) -> bool:
    return g.n > 0 and nx.is_connected(nx.complement(to_nx(g)))


def brute_clique_counts(g: Graph) -> list[int]:
    """N_j for j = 1..omega by testing every vertex subset."""
    counts = [0] * (g.n + 1)
    for r in range(1, g.n + 1):
        for s in itertools.combinations(range(g.n), r):
            if all(g.adj[a] >> b & 1 for a, b in itertools.combinations(s, 2)):
                counts[r] += 1
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return counts[1:]


def brute_chi(g: Graph) -> int:
    return 1 - sum((-1) ** j * c for j, c in enumerate(brute_clique_counts(g)))


@lru_cache(maxsize=None)
def subset_tables(n: int):
    """For every vertex subset: its size and the bitmask of vertex pairs it needs."""
    pairs = list(itertools.combinations(range(n), 2))
    need = np.zeros(1 << n, dtype=np.int64)
    size = np.zeros(1 << n, dtype=np.int64)
    for s in range(1 << n):
        size[s] = bin(s).count("1")
        m = 0
        for b, (i, j) in enumerate(pairs):
            if s >> i & 1 and s >> j & 1:
                m |= 1 << b
        need[s] = m
    return pairs, need[1:], size[1:]


def batch_clique_counts(adjs: list[tuple[int, ...]], n: int) -> np.ndarray:
    """Row k: clique counts by size 1..n of graph ``adjs[k]`` (vectorised subset test)."""
    pairs, need, size = subset_tables(n)
    codes = np.array(
        [sum(1 << b for b, (i, j) in enumerate(pairs) if adj[i] >> j & 1) for adj in adjs], dtype=np.int64
    )
    out = np.zeros((len(adjs), n + 1), dtype=np.int64)
    for k, code in enumerate(codes):
        ok = (need & ~code) == 0
        out[k] = np.bincount(size[ok], minlength=n + 1)
    return out[:, 1:]


def expected_kgroups(chi: int) -> tuple[tuple[int, tuple[int, ...]], tuple[int, tuple[int, ...]]]:
    """(free rank, torsion) of K0 and K1: Z, Z at chi = 0, else Z_|chi| and 0."""
    if chi == 0:
        return (1, ()), (1, ())
    return (0, (abs(chi),) if abs(chi) > 1 else ()), (0, ())


def linearizations(word, g: Graph) -> set[tuple[int, ...]]:
    start = tuple(word)
    seen = {start}
    todo = [start]
    while todo:
        w = todo.pop()
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if a != b and g.adj[a] >> b & 1:
                u = w[:i] + (b, a) + w[i + 2:]
                if u not in seen:
                    seen.add(u)
                    todo.append(u)
    return seen


def brute_normal_form(word, g: Graph) -> tuple[int, ...]:
    return min(linearizations(word, g))


def brute_class_count(g: Graph, L: int) -> int:
    """Commutation classes of length <= L, from all free words."""
    return len(set(class_map(g, L).values()))


def class_map(g: Graph, L: int) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Every free word of length <= L mapped to the least member of its class."""
    out: dict[tuple[int, ...], tuple[int, ...]] = {}
    for k in range(L + 1):
        for w in itertools.product(range(g.n), repeat=k):
            if w not in out:
                cls = linearizations(w, g)
                least = min(cls)
                for u in cls:
                    out[u] = least
    return out


class DenseFock:
    """Brute-force model of the truncated representation.

    Every operator here is a partial permutation of basis vectors, so it is
    stored as an index map (image row per column, -1 for a zero column).
    """

    def __init__(self, g: Graph, L: int):
        self.g = g
        self.L = L
        nf = class_map(g, L)
        self.words = sorted(set(nf.values()), key=lambda w: (len(w), w))
        self.index = {w: i for i, w in enumerate(self.words)}
        d = len(self.words)
        self.succ = []
        self.pred = []
        for s in range(g.n):
            f = np.full(d, -1, dtype=np.int64)
            b = np.full(d, -1, dtype=np.int64)
            for j, w in enumerate(self.words):
                if len(w) < L:
                    i = self.index[nf[(s,) + w]]
                    f[j] = i
                    b[i] = j
            self.succ.append(f)
            self.pred.append(b)

    def word(self, tokens) -> np.ndarray:
        """Index map of the product (rightmost factor acts first)."""
        out = np.arange(len(self.words), dtype=np.int64)
        for s, star in reversed(list(tokens)):
            step = self.pred[s] if star else self.succ[s]
            out = np.where(out >= 0, step[np.maximum(out, 0)], -1)
        return out

    def matrix(self, tokens) -> np.ndarray:
        m = self.word(tokens)
        d = len(self.words)
        out = np.zeros((d, d), dtype=np.int64)
        cols = np.flatnonzero(m >= 0)
        out[m[cols], cols] = 1
        return out

    def interior(self, budget: int) -> list[int]:
        return [i for i, w in enumerate(self.words) if len(w) <= budget]

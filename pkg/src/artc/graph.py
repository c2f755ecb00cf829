"""Finite simple graphs on labelled vertices.

Adjacency is stored as one integer bitmask per vertex, so induced subgraphs,
complements and neighbourhood intersections are cheap word operations. The
analysis entry points (dominated vertices, join decomposition, vertex
removal) all work on these masks.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import GraphParseError, HypothesisError, PreconditionError


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Finite simple graph. Vertex ``i`` has label ``labels[i]``.

    ``adj[i]`` is the bitmask of neighbours of ``i``. Instances are immutable
    by convention; every operation returns a new graph.
    """

    __slots__ = ("labels", "adj", "_index")

    def __init__(self, labels: Sequence[str], adj: Sequence[int]):
        labels = tuple(str(s) for s in labels)
        adj = tuple(int(a) for a in adj)
        n = len(labels)
        if len(adj) != n:
            raise ValueError("one adjacency mask per vertex required")
        if len(set(labels)) != n:
            dup = sorted({s for s in labels if labels.count(s) > 1})
            raise GraphParseError(f"duplicate vertex label(s): {', '.join(dup)}")
        full = (1 << n) - 1
        for i, a in enumerate(adj):
            if a >> i & 1:
                raise GraphParseError(f"self-loop at vertex {labels[i]!r}")
            if a & ~full:
                raise ValueError("adjacency mask refers to a missing vertex")
            for j in _bits(a):
                if not adj[j] >> i & 1:
                    raise ValueError("adjacency is not symmetric")
        self.labels = labels
        self.adj = adj
        self._index = None

    @classmethod
    def _trusted(cls, labels: tuple[str, ...], adj: tuple[int, ...]) -> Graph:
        # internal fast path: caller guarantees a valid simple graph
        g = object.__new__(cls)
        g.labels = labels
        g.adj = adj
        g._index = None
        return g

    @classmethod
    def from_edges(cls, labels: Sequence[str], edges: Iterable[tuple[str, str]]) -> Graph:
        labels = tuple(str(s) for s in labels)
        index = {s: i for i, s in enumerate(labels)}
        adj = [0] * len(labels)
        for u, v in edges:
            try:
                i, j = index[str(u)], index[str(v)]
            except KeyError as exc:
                raise GraphParseError(f"edge refers to unknown vertex {exc.args[0]!r}") from None
            if i == j:
                raise GraphParseError(f"self-loop at vertex {labels[i]!r}")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(labels, adj)

    @classmethod
    def edgeless(cls, n: int, start: int = 1) -> Graph:
        return cls._trusted(tuple(str(start + i) for i in range(n)), (0,) * n)

    @classmethod
    def cycle(cls, n: int, start: int = 1) -> Graph:
        labels = [str(start + i) for i in range(n)]
        return cls.from_edges(labels, [(labels[i], labels[(i + 1) % n]) for i in range(n)])

    @classmethod
    def path(cls, n: int, start: int = 1) -> Graph:
        labels = [str(start + i) for i in range(n)]
        return cls.from_edges(labels, [(labels[i], labels[i + 1]) for i in range(n - 1)])

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.labels == other.labels and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.labels, self.adj))

    def __repr__(self) -> str:
        return f"Graph({self.n} vertices, {self.edge_count()} edges)"

    def index(self, label: str) -> int:
        if self._index is None:
            self._index = {s: i for i, s in enumerate(self.labels)}
        try:
            return self._index[str(label)]
        except KeyError:
            raise KeyError(f"no vertex labelled {label!r}") from None

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)

    def neighbors(self, i: int) -> list[int]:
        return list(_bits(self.adj[i]))

    def degree(self, i: int) -> int:
        return bin(self.adj[i]).count("1")

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in _bits(self.adj[i] >> (i + 1) << (i + 1))]

    def edge_count(self) -> int:
        return sum(bin(a).count("1") for a in self.adj) // 2

    def induced(self, vertices: Iterable[int]) -> Graph:
        """Induced subgraph; vertices keep their relative order."""
        vs = sorted(set(vertices))
        pos = {v: k for k, v in enumerate(vs)}
        adj = []
        for v in vs:
            m = 0
            for u in _bits(self.adj[v]):
                k = pos.get(u)
                if k is not None:
                    m |= 1 << k
            adj.append(m)
        return Graph._trusted(tuple(self.labels[v] for v in vs), tuple(adj))

    def delete(self, v: int) -> Graph:
        return self.induced(i for i in range(self.n) if i != v)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.labels),
            "edges": [[self.labels[i], self.labels[j]] for i, j in self.edges()],
        }


# -- parsing ---------------------------------------------------------------

FORMATS = ("edge-json", "adjacency-text", "dot-subset")


def parse_graph(text: str, format: str = "edge-json") -> Graph:
    if format == "edge-json":
        return _parse_edge_json(text)
    if format == "adjacency-text":
        return _parse_adjacency(text)
    if format == "dot-subset":
        return _parse_dot(text)
    raise ValueError(f"unknown graph format {format!r}; expected one of {FORMATS}")


def _parse_edge_json(text: str) -> Graph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise GraphParseError('expected an object with a "vertices" list')
    verts = doc["vertices"]
    edges = doc.get("edges", [])
    if not isinstance(verts, list) or not all(isinstance(v, (str, int)) for v in verts):
        raise GraphParseError('"vertices" must be a list of strings')
    if not isinstance(edges, list):
        raise GraphParseError('"edges" must be a list of pairs')
    labels = [str(v) for v in verts]
    seen = set()
    pairs = []
    for k, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2):
            raise GraphParseError(f"edge #{k} is not a pair")
        u, v = str(e[0]), str(e[1])
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u!r} (edge #{k})")
        key = frozenset((u, v))
        if key in seen:
            raise GraphParseError(f"duplicate edge {u}--{v} (edge #{k})")
        seen.add(key)
        pairs.append((u, v))
    return Graph.from_edges(labels, pairs)


def _parse_adjacency(text: str) -> Graph:
    lines = [(no, ln.strip()) for no, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines:
        raise GraphParseError("empty adjacency text", 1)
    no, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise GraphParseError(f"expected vertex count, got {head!r}", no, 1) from None
    if n < 0:
        raise GraphParseError("negative vertex count", no, 1)
    rows = lines[1:]
    if len(rows) != n:
        raise GraphParseError(f"expected {n} matrix rows, found {len(rows)}", no)
    mat = []
    for no, ln in rows:
        entries = ln.split()
        if len(entries) != n:
            raise GraphParseError(f"expected {n} entries, found {len(entries)}", no)
        row = []
        for col, tok in enumerate(entries):
            if tok not in ("0", "1"):
                raise GraphParseError(f"entry {tok!r} is not 0/1", no, col + 1)
            row.append(tok == "1")
        mat.append((no, row))
    adj = [0] * n
    for i, (no, row) in enumerate(mat):
        if row[i]:
            raise GraphParseError(f"self-loop at vertex {i + 1}", no, i + 1)
        for j, bit in enumerate(row):
            if bit != mat[j][1][i]:
                raise GraphParseError(f"matrix not symmetric at ({i + 1}, {j + 1})", no, j + 1)
            if bit:
                adj[i] |= 1 << j
    return Graph([str(i + 1) for i in range(n)], adj)


_DOT_TOKEN = re.compile(r'\s+|//[^\n]*|#[^\n]*|--|[{};]|"(?:[^"\\]|\\.)*"|[A-Za-z0-9_.]+|.')


def _parse_dot(text: str) -> Graph:
    tokens = []
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def locate(pos: int) -> tuple[int, int]:
        line = max(k for k, s in enumerate(line_starts) if s <= pos)
        return line + 1, pos - line_starts[line] + 1

    for m in _DOT_TOKEN.finditer(text):
        tok = m.group()
        if tok.isspace() or tok.startswith("//") or tok.startswith("#"):
            continue
        tokens.append((tok, m.start()))

    def fail(msg: str, pos: int):
        raise GraphParseError(msg, *locate(pos))

    def ident(tok: str, pos: int) -> str:
        if tok.startswith('"'):
            return tok[1:-1].replace('\\"', '"')
        if re.fullmatch(r"[A-Za-z0-9_.]+", tok):
            return tok
        fail(f"unexpected token {tok!r}", pos)

    k = 0
    end = len(text)
    if k < len(tokens) and tokens[k][0] == "strict":
        k += 1
    if k >= len(tokens) or tokens[k][0] != "graph":
        fail("expected 'graph'", tokens[k][1] if k < len(tokens) else end)
    k += 1
    if k < len(tokens) and tokens[k][0] != "{":
        ident(*tokens[k])
        k += 1
    if k >= len(tokens) or tokens[k][0] != "{":
        fail("expected '{'", tokens[k][1] if k < len(tokens) else end)
    k += 1

    labels: list[str] = []
    known: set[str] = set()
    edges: set[frozenset] = set()
    edge_list: list[tuple[str, str]] = []

    def add_vertex(v: str):
        if v not in known:
            known.add(v)
            labels.append(v)

    while True:
        if k >= len(tokens):
            fail("unterminated graph body, expected '}'", end)
        tok, pos = tokens[k]
        if tok == "}":
            k += 1
            break
        if tok == ";":
            k += 1
            continue
        chain = [ident(tok, pos)]
        k += 1
        while k < len(tokens) and tokens[k][0] == "--":
            k += 1
            if k >= len(tokens):
                fail("dangling '--'", end)
            chain.append(ident(*tokens[k]))
            k += 1
        if k < len(tokens) and tokens[k][0] not in (";", "}"):
            fail(f"unexpected token {tokens[k][0]!r}", tokens[k][1])
        for v in chain:
            add_vertex(v)
        for u, v in zip(chain, chain[1:]):
            if u == v:
                fail(f"self-loop at vertex {u!r}", pos)
            key = frozenset((u, v))
            if key not in edges:
                edges.add(key)
                edge_list.append((u, v))
    if k != len(tokens):
        fail("trailing input after graph body", tokens[k][1])
    return Graph.from_edges(labels, edge_list)


# -- structure -------------------------------------------------------------


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph._trusted(g.labels, tuple(full & ~a & ~(1 << i) for i, a in enumerate(g.adj)))


def _components_masks(adj: Sequence[int], within: int) -> list[int]:
    comps = []
    rest = within
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = adj[low.bit_length() - 1] & within & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        rest &= ~comp
    return comps


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted index lists, ordered by smallest member."""
    return [list(_bits(c)) for c in _components_masks(g.adj, (1 << g.n) - 1)]


def _complement_connected(adj: Sequence[int], n: int) -> bool:
    full = (1 << n) - 1
    if n == 0:
        return True
    comp = 1
    frontier = 1
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        i = low.bit_length() - 1
        new = full & ~adj[i] & ~comp
        comp |= new
        frontier |= new
    return comp == full


def complement_connected(g: Graph) -> bool:
    return _complement_connected(g.adj, g.n)


def dominated_vertices(g: Graph) -> list[int]:
    """Vertices adjacent to every other vertex, i.e. isolated in the complement."""
    if g.n < 2:
        raise PreconditionError(f"graph too small: need at least 2 vertices, got {g.n}")
    full = (1 << g.n) - 1
    return [i for i, a in enumerate(g.adj) if a | (1 << i) == full]


def check_hypothesis(g: Graph) -> None:
    dom = dominated_vertices(g)
    if dom:
        labels = [g.labels[i] for i in dom]
        raise HypothesisError(
            "complement has isolated vertices; dominated vertex(es): " + ", ".join(labels), labels
        )


@dataclass(frozen=True)
class JoinDecomposition:
    factors: tuple[Graph, ...]
    factor_vertex_sets: tuple[tuple[int, ...], ...]


def join_decompose(g: Graph) -> JoinDecomposition:
    """Split ``g`` into join factors: induced subgraphs on the components of its complement."""
    check_hypothesis(g)
    parts = connected_components(complement(g))
    return JoinDecomposition(
        factors=tuple(g.induced(p) for p in parts),
        factor_vertex_sets=tuple(tuple(p) for p in parts),
    )


def join(*graphs: Graph) -> Graph:
    """Disjoint union plus every cross edge. Labels must be globally distinct."""
    labels: list[str] = []
    adj: list[int] = []
    offsets = []
    for h in graphs:
        offsets.append(len(labels))
        labels.extend(h.labels)
    total = (1 << len(labels)) - 1
    for h, off in zip(graphs, offsets):
        own = ((1 << h.n) - 1) << off
        for a in h.adj:
            adj.append((a << off) | (total & ~own))
    return Graph(labels, adj)


@dataclass(frozen=True)
class RemovalStep:
    removed_vertex: int
    gamma_prime: Graph
    gamma_k: Graph
    k: int
    # indices (in gamma_prime) of the removed vertex's neighbours
    neighbor_indices: tuple[int, ...] = ()


def _dfs_tree_leaf(adj: Sequence[int], n: int) -> int:
    """Smallest-index leaf of the DFS spanning tree of the complement, rooted at 0.

    The DFS always descends to the smallest unvisited complement neighbour.
    """
    full = (1 << n) - 1
    visited = 1
    stack = [0]
    has_child = 0
    root_children = 0
    while stack:
        top = stack[-1]
        cand = full & ~adj[top] & ~visited
        if not cand:
            stack.pop()
            continue
        low = cand & -cand
        visited |= low
        has_child |= 1 << top
        if top == 0:
            root_children += 1
        stack.append(low.bit_length() - 1)
    leaves = full & ~has_child & ~1
    if root_children == 1:
        leaves |= 1
    if not leaves:
        raise AssertionError("a spanning tree on >= 2 vertices has a leaf")
    return (leaves & -leaves).bit_length() - 1


def select_removal(g: Graph) -> RemovalStep:
    """Pick a vertex whose deletion keeps the complement connected.

    Builds a DFS spanning tree of the complement rooted at vertex 0 and removes
    its smallest-index leaf. Any leaf of any spanning tree would do; fixing the
    choice keeps the recursion reproducible.
    """
    if g.n < 3:
        raise PreconditionError(f"vertex removal needs at least 3 vertices, got {g.n}")
    if not complement_connected(g):
        raise PreconditionError("vertex removal needs a connected complement")
    v = _dfs_tree_leaf(g.adj, g.n)
    gp = g.delete(v)
    nbrs = tuple(i if i < v else i - 1 for i in _bits(g.adj[v]))
    gk = gp.induced(nbrs)
    return RemovalStep(removed_vertex=v, gamma_prime=gp, gamma_k=gk, k=len(nbrs), neighbor_indices=nbrs)


def all_graphs(n: int) -> Iterator[Graph]:
    """Every labelled simple graph on vertices "1".."n" (2^(n choose 2) of them).

    Built vertex by vertex: vertex j picks its neighbours among 0..j-1.
    """
    labels = tuple(str(i + 1) for i in range(n))

    def extend(adj: tuple[int, ...], j: int) -> Iterator[tuple[int, ...]]:
        if j == n:
            yield adj
            return
        bit = 1 << j
        for m in range(1 << j):
            grown = tuple(a | bit if m >> i & 1 else a for i, a in enumerate(adj)) + (m,)
            yield from extend(grown, j + 1)

    for adj in extend((), 0):
        yield Graph._trusted(labels, adj)

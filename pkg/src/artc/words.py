"""Words in the generating isometries V_s and their adjoints.

Positive words live in the trace monoid of the graph: letters s, t commute
exactly when s and t are adjacent. Each commutation class is stored by its
lexicographically least linearization (greedy: repeatedly take the smallest
letter that can be moved to the front).

A word in letters and adjoints is brought to the shape w1 w2* by the
left-to-right rewriting

    V_j* V_i  ->  0          if i != j are not adjacent
              ->  I          if i == j
              ->  V_i V_j*   if i, j are adjacent
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import GraphParseError, PreconditionError
from .graph import Graph, complement_connected


@dataclass(frozen=True)
class TraceWord:
    letters: tuple[int, ...]
    graph: Graph | None = field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def labels(self) -> list[str]:
        return [self.graph.labels[i] for i in self.letters]


def _nf(letters: Sequence[int], adj: Sequence[int]) -> tuple[int, ...]:
    rest = list(letters)
    out = []
    while rest:
        prefix = 0
        best = None
        best_pos = -1
        for pos, a in enumerate(rest):
            # a can move to the front iff every earlier letter commutes with it
            if not prefix & ~adj[a] and (best is None or a < best):
                best, best_pos = a, pos
            prefix |= 1 << a
        out.append(best)
        del rest[best_pos]
    return tuple(out)


def normal_form(letters: Iterable[int], g: Graph) -> TraceWord:
    letters = tuple(letters)
    for a in letters:
        if not 0 <= a < g.n:
            raise PreconditionError(f"letter {a} is not a vertex index of a {g.n}-vertex graph")
    return TraceWord(_nf(letters, g.adj), g)


def linearizations(word: Sequence[int], g: Graph) -> set[tuple[int, ...]]:
    """Every word reachable from ``word`` by swapping adjacent commuting letters."""
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


# -- star words and their reduction ----------------------------------------

Token = tuple[int, bool]  # (vertex, is_adjoint)


@dataclass(frozen=True)
class StarWord:
    factors: tuple[Token, ...]

    def __len__(self) -> int:
        return len(self.factors)

    def __add__(self, other: StarWord) -> StarWord:
        return StarWord(self.factors + other.factors)


@dataclass(frozen=True)
class ReducedForm:
    """w1 w2*, or the zero operator when both words are None."""

    w1: TraceWord | None
    w2: TraceWord | None

    @property
    def is_zero(self) -> bool:
        return self.w1 is None

    @property
    def is_identity(self) -> bool:
        return not self.is_zero and not self.w1.letters and not self.w2.letters

    def as_star_word(self) -> StarWord:
        if self.is_zero:
            raise ValueError("the zero form has no word")
        return StarWord(tuple((a, False) for a in self.w1) + tuple((a, True) for a in reversed(self.w2.letters)))

    def key(self):
        return None if self.is_zero else (self.w1.letters, self.w2.letters)


ZERO = ReducedForm(None, None)


def reduce(w: StarWord, g: Graph) -> ReducedForm:
    adj = g.adj
    w1: list[int] = []
    w2: list[int] = []  # w2[0] is the first letter of w2, i.e. the last adjoint applied
    stack = list(reversed(w.factors))
    while stack:
        i, star = stack.pop()
        if not 0 <= i < g.n:
            raise PreconditionError(f"letter {i} is not a vertex index")
        if star:
            w2.insert(0, i)
        elif not w2:
            w1.append(i)
        else:
            j = w2.pop(0)
            if i == j:
                continue
            if not adj[i] >> j & 1:
                return ZERO
            # V_j* V_i = V_i V_j*: push V_i through the rest of w2 first, then restore V_j*
            stack.append((j, True))
            stack.append((i, False))
    return ReducedForm(TraceWord(_nf(w1, adj), g), TraceWord(_nf(w2, adj), g))


# -- the distinguished-vertex word set -------------------------------------


def _trace_words(letters: Sequence[int], adj: Sequence[int], max_len: int) -> list[tuple[int, ...]]:
    level = {()}
    out = [()]
    for _ in range(max_len):
        nxt = {_nf(u + (a,), adj) for u in level for a in letters}
        out.extend(sorted(nxt))
        level = nxt
    return out


def is_omega_word(letters: Sequence[int], g: Graph, v: int) -> bool:
    """True iff no letter of the word can be commuted to the far right and past V_v."""
    adj = g.adj
    suffix = 0
    for a in reversed(letters):
        if a == v:
            return False
        if not suffix & ~adj[a] and adj[v] >> a & 1:
            return False
        suffix |= 1 << a
    return True


def omega_enumerate(g: Graph, v: int, max_len: int) -> list[TraceWord]:
    """Normal-form words over the vertices other than ``v`` that cannot be moved past V_v.

    Ordered by length, then lexicographically; the empty word comes first.
    """
    if not 0 <= v < g.n:
        raise PreconditionError(f"vertex {v} out of range")
    if not complement_connected(g):
        raise PreconditionError("omega enumeration needs a connected complement")
    letters = [a for a in range(g.n) if a != v]
    return [TraceWord(w, g) for w in _trace_words(letters, g.adj, max_len) if is_omega_word(w, g, v)]


class Delta(enum.Enum):
    IDENTITY = "identity"
    ZERO = "zero"


@dataclass(frozen=True)
class Violation:
    form: ReducedForm


def delta_word(p: Sequence[int], q: Sequence[int], v: int) -> StarWord:
    """V* q* p V as a star word."""
    return StarWord(((v, True),) + tuple((a, True) for a in reversed(tuple(q)))
                    + tuple((a, False) for a in p) + ((v, False),))


def delta_check(p: TraceWord, q: TraceWord, g_full: Graph, v: int) -> Delta | Violation:
    for w in (p, q):
        if not is_omega_word(w.letters, g_full, v):
            raise PreconditionError(f"word {w.letters} is not in the omega set for vertex {v}")
    r = reduce(delta_word(p.letters, q.letters, v), g_full)
    if r.is_zero:
        return Delta.ZERO
    if r.is_identity:
        return Delta.IDENTITY
    return Violation(r)


# -- serialisation ---------------------------------------------------------


def parse_star_word(text: str, g: Graph) -> StarWord:
    """Parse ``[{"v": label, "star": bool}, ...]``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid JSON word: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, list):
        raise GraphParseError("a star word is a JSON list")
    out = []
    for k, item in enumerate(doc):
        if not isinstance(item, dict) or "v" not in item:
            raise GraphParseError(f"word entry #{k} needs a \"v\" field")
        try:
            i = g.index(str(item["v"]))
        except KeyError:
            raise GraphParseError(f"word entry #{k}: unknown vertex {item['v']!r}") from None
        out.append((i, bool(item.get("star", False))))
    return StarWord(tuple(out))


def star_word_to_json(w: StarWord, g: Graph) -> list[dict]:
    return [{"v": g.labels[i], "star": s} for i, s in w.factors]


def format_word(w: TraceWord) -> str:
    return " ".join(w.labels())


def format_reduced(r: ReducedForm) -> str:
    if r.is_zero:
        return "ZERO"
    if r.is_identity:
        return "I"
    left = " ".join(f"V_{s}" for s in r.w1.labels())
    right = " ".join(f"V_{s}*" for s in reversed(r.w2.labels()))
    return " ".join(x for x in (left, right) if x)


def reduced_to_json(r: ReducedForm) -> dict | str:
    if r.is_zero:
        return "ZERO"
    return {"w1": r.w1.labels(), "w2": r.w2.labels()}

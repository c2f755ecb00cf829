"""Exact integer matrices and Smith normal form with unimodular transforms.

Entries are Python ints, so there is no overflow to guard against; the
pivoting keeps intermediate entries small anyway.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class IntMatrix:
    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Sequence[int]], ncols: int | None = None):
        self.rows = [[int(x) for x in r] for r in rows]
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(self.rows[0])
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("matrix is not rectangular")
        self.ncols = ncols

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntMatrix:
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def diagonal(cls, entries: Sequence[int], nrows: int | None = None, ncols: int | None = None) -> IntMatrix:
        nrows = len(entries) if nrows is None else nrows
        ncols = len(entries) if ncols is None else ncols
        m = cls.zeros(nrows, ncols)
        for i, d in enumerate(entries):
            m.rows[i][i] = d
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.rows[ij[0]][ij[1]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows!r}, ncols={self.ncols})"

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows], other.ncols
        )

    def transpose(self) -> IntMatrix:
        if not self.rows:
            return IntMatrix.zeros(self.ncols, 0)
        return IntMatrix([list(c) for c in zip(*self.rows)], self.nrows)

    def copy(self) -> IntMatrix:
        return IntMatrix(self.rows, self.ncols)

    def is_diagonal(self) -> bool:
        return all(x == 0 for i, r in enumerate(self.rows) for j, x in enumerate(r) if i != j)


@dataclass
class SmithForm:
    """``left @ m @ right == diag``; ``left_inv``/``right_inv`` are the exact inverses."""

    factors: list[int]  # nonzero invariant factors, d1 | d2 | ...
    diag: IntMatrix
    left: IntMatrix
    right: IntMatrix
    left_inv: IntMatrix
    right_inv: IntMatrix

    @property
    def rank(self) -> int:
        return len(self.factors)


def smith_normal_form(m: IntMatrix) -> SmithForm:
    """Smith normal form by repeated smallest-pivot elimination.

    The pivot is always the entry of least absolute value in the remaining
    block (first in row-major order on ties), which keeps the transforms
    deterministic.
    """
    r, c = m.shape
    a = [row[:] for row in m.rows]
    L = [[int(i == j) for j in range(r)] for i in range(r)]
    Linv = [[int(i == j) for j in range(r)] for i in range(r)]
    R = [[int(i == j) for j in range(c)] for i in range(c)]
    Rinv = [[int(i == j) for j in range(c)] for i in range(c)]

    # Row ops act on a and L from the left; Linv receives the inverse op on the right.
    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        L[i], L[j] = L[j], L[i]
        for row in Linv:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q == 0:
            return
        ad, as_ = a[dst], a[src]
        for k in range(c):
            ad[k] += q * as_[k]
        ld, ls = L[dst], L[src]
        for k in range(r):
            ld[k] += q * ls[k]
        for row in Linv:  # col_src -= q * col_dst
            row[src] -= q * row[dst]

    def neg_row(i):
        a[i] = [-x for x in a[i]]
        L[i] = [-x for x in L[i]]
        for row in Linv:
            row[i] = -row[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]
        Rinv[i], Rinv[j] = Rinv[j], Rinv[i]

    def add_col(dst, src, q):  # col_dst += q * col_src
        if q == 0:
            return
        for row in a:
            row[dst] += q * row[src]
        for row in R:
            row[dst] += q * row[src]
        rd, rs = Rinv[dst], Rinv[src]  # row_src -= q * row_dst
        for k in range(c):
            rs[k] -= q * rd[k]

    factors = []
    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                row = a[i]
                for j in range(t, c):
                    v = row[j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, r):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, c):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        dirty = True
            if dirty:
                continue
            # row and column clear; enforce divisibility on the rest of the block
            bad = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if best is None:
            break
        if a[t][t] < 0:
            neg_row(t)
        factors.append(a[t][t])

    return SmithForm(
        factors=factors,
        diag=IntMatrix(a, c),
        left=IntMatrix(L, r),
        right=IntMatrix(R, c),
        left_inv=IntMatrix(Linv, r),
        right_inv=IntMatrix(Rinv, c),
    )


def invariant_factors(m: IntMatrix) -> list[int]:
    return smith_normal_form(m).factors



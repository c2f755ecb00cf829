"""K-groups of the boundary quotient C*_Q(G) and of the Toeplitz algebra C*(G).

Two independent routes:

* ``kgroups_closed_form`` evaluates the answer in terms of chi alone:
  K0 = Z_|chi| (Z when chi = 0), K1 = 0 (Z when chi = 0), with the unit class
  generating K0.
* ``pv_truncated`` rebuilds it from the crossed-product picture. K0 of the
  coefficient algebra is the shift module generated by classes g_i, i in Z,
  subject to x g_i = y g_{i+1} (x = chi(G'), y = chi(G_k)); the Pimsner-
  Voiculescu sequence then reads K0 as coker(id - shift) and K1 as
  ker(id - shift), plus coker(id - shift) on K1 of the coefficient algebra
  when x = y = 0. The shift module is truncated to indices -N..N, reduced by
  Smith normal form, and only accepted when windows N and N + 1 agree.

Group conventions: Z_0 is Z and Z_1 is the trivial group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from .errors import OracleInstabilityError, PreconditionError, VerificationError
from .euler import chi_direct, chi_recursive
from .graph import Graph, complement_connected, select_removal
from .snf import IntMatrix, smith_normal_form


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@dataclass(frozen=True)
class FGAbelianGroup:
    """Z^free_rank + Z_d1 + ... + Z_dk with d1 | d2 | ... and every d >= 2.

    ``marked_class`` holds the coordinates of a distinguished element, torsion
    summands first (reduced mod d_i), then the free summands.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()
    marked_class: tuple[int, ...] = ()

    def __post_init__(self):
        t = self.torsion
        if any(d < 2 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not an invariant-factor chain")
        if self.marked_class and len(self.marked_class) != len(t) + self.free_rank:
            raise ValueError("marked_class needs one coordinate per summand")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int:
        """Group order; 0 stands for infinite."""
        if self.free_rank:
            return 0
        out = 1
        for d in self.torsion:
            out *= d
        return out

    @property
    def marked_order(self) -> int | None:
        """Order of the marked element (0 = infinite), or None when nothing is marked."""
        if not self.marked_class:
            return None if not self.is_trivial else 1
        t = len(self.torsion)
        if any(self.marked_class[t:]):
            return 0
        out = 1
        for d, x in zip(self.torsion, self.marked_class):
            out = _lcm(out, d // gcd(d, x))
        return out

    def invariants(self) -> tuple[int, tuple[int, ...]]:
        return self.free_rank, self.torsion

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z_{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "free_rank": self.free_rank,
            "torsion": list(self.torsion),
            "marked_class": list(self.marked_class),
            "marked_order": self.marked_order,
            "display": str(self),
        }


@dataclass(frozen=True)
class Presentation:
    n_generators: int
    relations: IntMatrix  # one row per relation

    def __post_init__(self):
        if self.relations.ncols != self.n_generators:
            raise ValueError("relation matrix needs one column per generator")

    @classmethod
    def from_rows(cls, n_generators: int, rows: Sequence[Sequence[int]]) -> Presentation:
        return cls(n_generators, IntMatrix(rows, n_generators))


def group_from_presentation(p: Presentation, marked: int | Sequence[int] | None = None) -> FGAbelianGroup:
    """The abelian group Z^n / (row space of the relations).

    ``marked`` is a generator index or an integer combination of generators;
    its image is recorded in the canonical decomposition.
    """
    snf = smith_normal_form(p.relations)
    factors, rank, n = snf.factors, snf.rank, p.n_generators
    torsion_idx = [i for i, d in enumerate(factors) if d > 1]
    torsion = tuple(factors[i] for i in torsion_idx)
    free_rank = n - rank
    if marked is None:
        return FGAbelianGroup(free_rank, torsion)
    if isinstance(marked, int):
        vec = [int(i == marked) for i in range(n)]
    else:
        vec = list(marked)
        if len(vec) != n:
            raise ValueError("marked vector needs one entry per generator")
    # quotient coordinates: y = vec @ right (relations are rows)
    y = [sum(vec[i] * snf.right.rows[i][j] for i in range(n)) for j in range(n)]
    mc = tuple(y[i] % factors[i] for i in torsion_idx) + tuple(y[rank:])
    return FGAbelianGroup(free_rank, torsion, mc)


def _check_homomorphism(source: Presentation, target: Presentation, images: IntMatrix) -> None:
    """Every source relation must map into the target relation lattice."""
    if images.shape != (source.n_generators, target.n_generators):
        raise ValueError("images must be n_source x n_target")
    if not source.relations.nrows:
        return
    b = target.n_generators
    snf = smith_normal_form(target.relations) if target.relations.nrows else None
    for r in (source.relations @ images).rows:
        if snf is None:
            y, factors, rank = r, [], 0
        else:
            y = [sum(r[i] * snf.right.rows[i][j] for i in range(b)) for j in range(b)]
            factors, rank = snf.factors, snf.rank
        if any(y[rank:]) or any(y[i] % factors[i] for i in range(rank)):
            raise ValueError("images do not define a homomorphism (a source relation is not killed)")


def hom_cokernel(source: Presentation, target: Presentation, images: IntMatrix,
                 marked: int | Sequence[int] | None = None) -> FGAbelianGroup:
    """Cokernel of the map sending source generator i to row i of ``images``."""
    _check_homomorphism(source, target, images)
    rel = IntMatrix(target.relations.rows + images.rows, target.n_generators)
    return group_from_presentation(Presentation(target.n_generators, rel), marked)


def hom_kernel(source: Presentation, target: Presentation, images: IntMatrix) -> FGAbelianGroup:
    """Kernel of the induced map between presented groups.

    Lifts are the u in Z^a with u @ images in the target relation lattice; the
    kernel is that lattice modulo the source relations, re-presented on a basis.
    """
    _check_homomorphism(source, target, images)
    a, b = source.n_generators, target.n_generators
    stacked = IntMatrix(images.rows + target.relations.rows, b)
    s = smith_normal_form(stacked)
    # left kernel of the stack: rows of the left transform past the rank
    lifts = [row[:a] for row in s.left.rows[s.rank:]]
    lifts = [v for v in lifts if any(v)]
    if not lifts:
        return FGAbelianGroup(0)
    s2 = smith_normal_form(IntMatrix(lifts, a))
    k = s2.rank
    # lattice basis rows: d_i * (row i of right_inv); coordinates of v are (v @ right)_i / d_i
    rel_rows = []
    for r in source.relations.rows:
        w = [sum(r[i] * s2.right.rows[i][j] for i in range(a)) for j in range(a)]
        if any(w[k:]) or any(w[i] % s2.factors[i] for i in range(k)):
            raise ValueError("images do not define a homomorphism (a source relation is not killed)")
        rel_rows.append([w[i] // s2.factors[i] for i in range(k)])
    return group_from_presentation(Presentation(k, IntMatrix(rel_rows, k)))


def direct_sum(*groups: FGAbelianGroup) -> FGAbelianGroup:
    free = sum(g.free_rank for g in groups)
    divisors = [d for g in groups for d in g.torsion]
    if not divisors:
        return FGAbelianGroup(free)
    snf = smith_normal_form(IntMatrix.diagonal(divisors))
    return FGAbelianGroup(free, tuple(d for d in snf.factors if d > 1))


@dataclass(frozen=True)
class KResult:
    k0: FGAbelianGroup
    k1: FGAbelianGroup
    chi: int
    source: str  # "closed-form" | "pv-truncated"
    extension_multiplier: int | None = None  # Toeplitz algebra only
    oracle: KResult | None = None
    windows: tuple[int, ...] = field(default=())

    def to_json(self) -> dict:
        out = {"chi": self.chi, "source": self.source, "K0": self.k0.to_json(), "K1": self.k1.to_json()}
        if self.extension_multiplier is not None:
            out["extension_multiplier"] = self.extension_multiplier
        if self.windows:
            out["windows"] = list(self.windows)
        if self.oracle is not None:
            out["oracle"] = self.oracle.to_json()
        return out


def _cyclic(order: int) -> FGAbelianGroup:
    """Z_order with its generator marked (Z for order 0, trivial for order 1)."""
    if order == 0:
        return FGAbelianGroup(1, (), (1,))
    if order == 1:
        return FGAbelianGroup(0)
    return FGAbelianGroup(0, (order,), (1,))


def kgroups_closed_form(chi: int) -> KResult:
    k0 = _cyclic(abs(chi))
    k1 = FGAbelianGroup(1) if chi == 0 else FGAbelianGroup(0)
    return KResult(k0=k0, k1=k1, chi=chi, source="closed-form")


def kgroups_toeplitz(chi: int) -> KResult:
    """K-theory of C*(G): always (Z, 0) with the unit generating K0.

    The ideal of compacts includes into C*(G) on K0 as multiplication by chi;
    that multiplier is reported alongside.
    """
    return KResult(k0=_cyclic(0), k1=FGAbelianGroup(0), chi=chi, source="closed-form",
                   extension_multiplier=chi)


def _shift_window(x: int, y: int, N: int, direction: int):
    """Truncated shift module on g_{-N}..g_N and the source window of the shift."""
    n = 2 * N + 1
    idx = lambda i: i + N  # noqa: E731
    rels = []
    for i in range(-N, N):
        row = [0] * n
        row[idx(i)] += x
        row[idx(i + 1)] -= y
        rels.append(row)
    module = Presentation(n, IntMatrix(rels, n))
    # generators whose shift stays inside the window, and the relations among them
    src_range = range(-N, N) if direction > 0 else range(-N + 1, N + 1)
    src_pos = {i: k for k, i in enumerate(src_range)}
    src_rels = []
    for i in range(-N, N):
        if i in src_pos and i + 1 in src_pos:
            row = [0] * len(src_pos)
            row[src_pos[i]] += x
            row[src_pos[i + 1]] -= y
            src_rels.append(row)
    src = Presentation(len(src_pos), IntMatrix(src_rels, len(src_pos)))
    # (id - shift) on the source window
    images = []
    for i in src_range:
        row = [0] * n
        row[idx(i)] += 1
        row[idx(i + direction)] -= 1
        images.append(row)
    return module, src, IntMatrix(images, n), idx(0)


def _shift_relations(N: int, direction: int) -> list[list[int]]:
    # g_i - g_{i+direction} for every i whose shift stays in the window
    n = 2 * N + 1
    rows = []
    for i in range(-N, N + 1):
        j = i + direction
        if -N <= j <= N:
            row = [0] * n
            row[i + N] += 1
            row[j + N] -= 1
            rows.append(row)
    return rows


def _pv_window(x: int, y: int, N: int, direction: int) -> tuple[FGAbelianGroup, FGAbelianGroup]:
    module, src, id_minus_shift, zero = _shift_window(x, y, N, direction)
    n = module.n_generators
    shift_rows = _shift_relations(N, direction)
    k0 = group_from_presentation(Presentation(n, IntMatrix(module.relations.rows + shift_rows, n)), zero)
    k1 = hom_kernel(src, module, id_minus_shift)
    if x == 0 and y == 0:
        # K1 of the coefficient algebra: free shift module on one class
        extra = group_from_presentation(Presentation(n, IntMatrix(shift_rows, n)))
        if k1.torsion:
            raise OracleInstabilityError("non-free kernel part; K1 extension is not determined")
        k1 = direct_sum(k1, extra)
    return k0, k1


def _signature(k0: FGAbelianGroup, k1: FGAbelianGroup):
    return (k0.free_rank, k0.torsion, k0.marked_order, k1.free_rank, k1.torsion)


def pv_truncated(x: int, y: int, window: int = 6, direction: int = 1) -> KResult:
    """K-groups from the truncated crossed-product sequence; x = chi(G'), y = chi(G_k)."""
    if window < 2:
        raise PreconditionError("truncation window must be at least 2")
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    a = _pv_window(x, y, window, direction)
    b = _pv_window(x, y, window + 1, direction)
    if _signature(*a) != _signature(*b):
        raise OracleInstabilityError(
            f"truncated sequence unstable for (x, y) = ({x}, {y}): window {window} gives "
            f"K0={a[0]}, K1={a[1]}; window {window + 1} gives K0={b[0]}, K1={b[1]}"
        )
    return KResult(k0=a[0], k1=a[1], chi=x - y, source="pv-truncated", windows=(window, window + 1))


def same_kgroups(a: KResult, b: KResult) -> bool:
    """Agreement in free rank, torsion chain and order of the marked K0 class."""
    return _signature(a.k0, a.k1) == _signature(b.k0, b.k1)


def kgroups_for_graph(g: Graph, window: int = 6) -> KResult:
    """Closed-form K-groups of C*_Q(g) for ``g`` with connected complement.

    chi is assembled from the top removal step as chi(G') - chi(G_k), and the
    same pair (chi(G'), chi(G_k)) is fed to the truncated sequence as an
    independent check. The two-vertex base case has no removal step and no
    oracle.
    """
    if g.n < 2:
        raise PreconditionError("need at least 2 vertices")
    if not complement_connected(g):
        raise PreconditionError("K-groups of a single factor need a connected complement")
    if g.n == 2:
        return kgroups_closed_form(-1)
    step = select_removal(g)
    x = chi_recursive(step.gamma_prime).chi
    y = chi_direct(step.gamma_k).chi
    closed = kgroups_closed_form(x - y)
    oracle = pv_truncated(x, y, window)
    if not same_kgroups(closed, oracle):
        raise VerificationError(
            f"closed form ({closed.k0}, {closed.k1}) disagrees with truncated sequence "
            f"({oracle.k0}, {oracle.k1}) at chi(G')={x}, chi(G_k)={y}"
        )
    return KResult(k0=closed.k0, k1=closed.k1, chi=x - y, source="closed-form", oracle=oracle)

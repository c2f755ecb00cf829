import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import artc.kgroups as kg
from artc.errors import OracleInstabilityError, PreconditionError, VerificationError
from artc.graph import Graph, all_graphs, complement_connected
from artc.kgroups import (
    FGAbelianGroup,
    Presentation,
    direct_sum,
    group_from_presentation,
    hom_cokernel,
    hom_kernel,
    kgroups_closed_form,
    kgroups_for_graph,
    kgroups_toeplitz,
    pv_truncated,
    same_kgroups,
)
from artc.snf import IntMatrix
from oracles import brute_chi, expected_kgroups


def inv(k):
    return (k.k0.free_rank, k.k0.torsion), (k.k1.free_rank, k.k1.torsion)


# -- presentations -------------------------------------------------------------


def test_presentation_examples():
    assert group_from_presentation(Presentation.from_rows(1, [[5]])).invariants() == (0, (5,))
    assert group_from_presentation(Presentation.from_rows(2, [[2, -3]])).invariants() == (1, ())
    assert group_from_presentation(Presentation.from_rows(2, [[3, 0], [0, 3]])).invariants() == (0, (3, 3))
    assert group_from_presentation(Presentation.from_rows(2, [[0, 0]])).invariants() == (2, ())


def test_marked_class():
    g = group_from_presentation(Presentation.from_rows(2, [[2, -3]]), marked=0)
    # Z^2 / (2, -3): g0 maps to 3 times a generator of Z
    assert g.marked_order == 0 and abs(g.marked_class[0]) == 3
    g = group_from_presentation(Presentation.from_rows(1, [[6]]), marked=[2])
    assert g.marked_order == 3
    assert FGAbelianGroup(0).marked_order == 1
    assert FGAbelianGroup(1).marked_order is None


def test_group_validation():
    with pytest.raises(ValueError):
        FGAbelianGroup(0, (4, 6))
    with pytest.raises(ValueError):
        FGAbelianGroup(0, (1,))
    assert str(FGAbelianGroup(1, (3,))) == "Z + Z_3"
    assert str(FGAbelianGroup(0)) == "0"


relations = st.integers(1, 4).flatmap(
    lambda n: st.tuples(
        st.just(n), st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=0, max_size=4)
    )
)


@given(relations, st.randoms(use_true_random=False))
@settings(max_examples=200)
def test_presentation_invariant_under_row_operations(data, rng):
    n, rows = data
    if not rows:
        return
    base = group_from_presentation(Presentation.from_rows(n, rows)).invariants()
    shuffled = rows[:]
    rng.shuffle(shuffled)
    if len(shuffled) > 1:
        q = rng.randint(-3, 3)
        shuffled[0] = [a + q * b for a, b in zip(shuffled[0], shuffled[1])]
    shuffled[-1] = [-a for a in shuffled[-1]]
    assert group_from_presentation(Presentation.from_rows(n, shuffled)).invariants() == base


def test_hom_cokernel_and_kernel():
    z = Presentation.from_rows(1, [])
    times3 = IntMatrix([[3]])
    assert hom_cokernel(z, z, times3).invariants() == (0, (3,))
    assert hom_kernel(z, z, times3).invariants() == (0, ())
    # Z_6 -> Z_6, x -> 2x: kernel {0, 3} = Z_2, cokernel Z_2
    z6 = Presentation.from_rows(1, [[6]])
    assert hom_kernel(z6, z6, IntMatrix([[2]])).invariants() == (0, (2,))
    assert hom_cokernel(z6, z6, IntMatrix([[2]])).invariants() == (0, (2,))
    # zero map Z^2 -> Z: kernel Z^2
    assert hom_kernel(Presentation.from_rows(2, []), z, IntMatrix([[0], [0]])).invariants() == (2, ())
    with pytest.raises(ValueError):
        hom_kernel(z6, z, IntMatrix([[1]]))  # not a homomorphism


def test_direct_sum():
    assert direct_sum(FGAbelianGroup(0, (2,)), FGAbelianGroup(1, (3,))).invariants() == (1, (6,))
    assert direct_sum(FGAbelianGroup(0, (2,)), FGAbelianGroup(0, (2,))).invariants() == (0, (2, 2))


# -- closed forms --------------------------------------------------------------


@pytest.mark.parametrize("chi", range(-8, 9))
def test_closed_form_matches_expected(chi):
    k = kgroups_closed_form(chi)
    assert inv(k) == expected_kgroups(chi)
    # the unit generates K0
    assert k.k0.marked_order == abs(chi)


def test_closed_form_examples():
    assert kgroups_closed_form(-1).k0.is_trivial and kgroups_closed_form(-1).k1.is_trivial
    assert str(kgroups_closed_form(0).k0) == "Z" and str(kgroups_closed_form(0).k1) == "Z"
    for n in range(2, 7):
        assert inv(kgroups_closed_form(1 - n)) == ((0, (n - 1,) if n > 2 else ()), (0, ()))


@pytest.mark.parametrize("chi", [-1, 0, 4])
def test_toeplitz(chi):
    t = kgroups_toeplitz(chi)
    assert inv(t) == ((1, ()), (0, ()))
    assert t.k0.marked_order == 0
    assert t.extension_multiplier == chi


# -- truncated PV sequence -----------------------------------------------------


@pytest.mark.parametrize(
    "x, y, expected",
    [
        (0, 0, ((1, ()), (1, ()))),
        (3, 3, ((1, ()), (1, ()))),
        (2, 5, ((0, (3,)), (0, ()))),
        (4, 0, ((0, (4,)), (0, ()))),
        (0, -2, ((0, (2,)), (0, ()))),
    ],
)
def test_pv_examples(x, y, expected):
    for direction in (1, -1):
        r = pv_truncated(x, y, 6, direction)
        assert inv(r) == expected
        assert r.windows == (6, 7)


def test_pv_both_directions_small_sweep():
    for x in range(-4, 5):
        for y in range(-4, 5):
            a = pv_truncated(x, y, 4, 1)
            b = pv_truncated(x, y, 4, -1)
            assert same_kgroups(a, b) and same_kgroups(a, kgroups_closed_form(x - y))


def test_pv_window_precondition():
    with pytest.raises(PreconditionError):
        pv_truncated(1, 2, 1)


def test_pv_instability_is_reported(monkeypatch):
    real = kg._pv_window

    def flaky(x, y, N, direction):
        k0, k1 = real(x, y, N, direction)
        return (k0, k1) if N % 2 == 0 else (FGAbelianGroup(k0.free_rank + 1), k1)

    monkeypatch.setattr(kg, "_pv_window", flaky)
    with pytest.raises(OracleInstabilityError):
        pv_truncated(2, 5, 6)


# -- graphs --------------------------------------------------------------------


def test_for_graph_examples():
    assert inv(kgroups_for_graph(Graph.edgeless(2))) == ((0, ()), (0, ()))
    assert inv(kgroups_for_graph(Graph.path(4))) == ((1, ()), (1, ()))
    c5 = kgroups_for_graph(Graph.cycle(5))
    assert inv(c5) == ((0, ()), (0, ())) and c5.chi == 1 and c5.oracle is not None


@pytest.mark.parametrize("n", [3, 4, 5])
def test_for_graph_exhaustive(n):
    for g in all_graphs(n):
        if complement_connected(g):
            k = kgroups_for_graph(g, window=3)
            assert k.chi == brute_chi(g)
            assert inv(k) == expected_kgroups(k.chi)


def test_for_graph_random_larger():
    rng = random.Random(7)
    done = 0
    while done < 25:
        n = rng.randint(6, 10)
        labels = [str(i) for i in range(n)]
        edges = [(labels[i], labels[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4]
        g = Graph.from_edges(labels, edges)
        if not complement_connected(g):
            continue
        assert kgroups_for_graph(g, window=3).chi == brute_chi(g)
        done += 1


def test_for_graph_disagreement_raises(monkeypatch):
    monkeypatch.setattr(kg, "pv_truncated", lambda x, y, w: kgroups_closed_form(x - y + 1))
    with pytest.raises(VerificationError):
        kgroups_for_graph(Graph.cycle(5))


def test_for_graph_preconditions():
    with pytest.raises(PreconditionError):
        kgroups_for_graph(Graph.cycle(4))


def test_cokernel_rejects_non_homomorphism():
    with pytest.raises(ValueError):
        hom_cokernel(Presentation.from_rows(1, [[6]]), Presentation.from_rows(1, [[4]]), IntMatrix([[1]]))
    # Z_6 -> Z_3, 1 -> 1 is fine
    assert hom_cokernel(Presentation.from_rows(1, [[6]]), Presentation.from_rows(1, [[3]]), IntMatrix([[1]])).is_trivial

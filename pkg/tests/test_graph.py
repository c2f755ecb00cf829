import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artc.errors import GraphParseError, HypothesisError, PreconditionError
from artc.graph import (
    Graph,
    all_graphs,
    check_hypothesis,
    complement,
    complement_connected,
    connected_components,
    dominated_vertices,
    join,
    join_decompose,
    parse_graph,
    select_removal,
)
from oracles import complement_is_connected

C4 = '{"vertices":["1","2","3","4"],"edges":[["1","2"],["2","3"],["3","4"],["4","1"]]}'


@st.composite
def graphs(draw, min_n=0, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    labels = [f"v{i}" for i in range(n)]
    return Graph.from_edges(labels, [(labels[i], labels[j]) for (i, j), b in zip(pairs, bits) if b])


# -- parsing -----------------------------------------------------------------


def test_parse_smallest_admissible():
    g = parse_graph('{"vertices":["a","b"],"edges":[]}')
    assert g.labels == ("a", "b") and g.edge_count() == 0


def test_parse_four_cycle():
    g = parse_graph(C4)
    assert g.n == 4 and g.edge_count() == 4
    assert all(g.degree(i) == 2 for i in range(4))


def test_parse_rejects_self_loop():
    with pytest.raises(GraphParseError, match="self-loop"):
        parse_graph('{"vertices":["a"],"edges":[["a","a"]]}')


def test_parse_rejects_duplicates():
    with pytest.raises(GraphParseError, match="duplicate edge"):
        parse_graph('{"vertices":["a","b"],"edges":[["a","b"],["b","a"]]}')
    with pytest.raises(GraphParseError, match="duplicate"):
        parse_graph('{"vertices":["a","a"],"edges":[]}')


def test_parse_unknown_vertex_and_bad_json():
    with pytest.raises(GraphParseError, match="unknown vertex"):
        parse_graph('{"vertices":["a"],"edges":[["a","z"]]}')
    with pytest.raises(GraphParseError) as exc:
        parse_graph('{\n  "vertices": [,]\n}')
    assert exc.value.line == 2


def test_adjacency_text():
    g = parse_graph("3\n0 1 0\n1 0 1\n0 1 0\n", "adjacency-text")
    assert g.labels == ("1", "2", "3") and g.edges() == [(0, 1), (1, 2)]
    with pytest.raises(GraphParseError, match="symmetric") as exc:
        parse_graph("2\n0 1\n0 0\n", "adjacency-text")
    assert exc.value.line == 2
    with pytest.raises(GraphParseError, match="self-loop"):
        parse_graph("2\n1 0\n0 0\n", "adjacency-text")
    with pytest.raises(GraphParseError, match="0/1"):
        parse_graph("2\n0 2\n2 0\n", "adjacency-text")


def test_dot_subset():
    g = parse_graph('graph G {\n  a -- b -- c; // chain\n  "d e" -- a;\n  b -- a;\n}', "dot-subset")
    assert g.labels == ("a", "b", "c", "d e")
    assert g.edge_count() == 3
    with pytest.raises(GraphParseError) as exc:
        parse_graph("graph {\n a -- ;\n}", "dot-subset")
    assert exc.value.line == 2
    with pytest.raises(GraphParseError, match="self-loop"):
        parse_graph("graph { a -- a }", "dot-subset")


def test_formats_agree():
    a = parse_graph(C4)
    b = parse_graph("4\n0 1 0 1\n1 0 1 0\n0 1 0 1\n1 0 1 0", "adjacency-text")
    c = parse_graph("graph { 1 -- 2 -- 3 -- 4 -- 1 }", "dot-subset")
    assert a == b == c


# -- complement and components -----------------------------------------------


def test_complement_examples():
    assert complement(Graph.edgeless(2)).edge_count() == 1
    c = complement(parse_graph(C4))
    assert c.edges() == [(0, 2), (1, 3)]
    assert connected_components(Graph.edgeless(2)) == [[0], [1]]
    assert connected_components(parse_graph(C4)) == [[0, 1, 2, 3]]
    assert connected_components(c) == [[0, 2], [1, 3]]


@given(graphs())
def test_complement_involution(g):
    assert complement(complement(g)) == g


@given(graphs(min_n=1))
def test_complement_connectivity_matches_networkx(g):
    assert complement_connected(g) == complement_is_connected(g)


# -- hypothesis gate and join decomposition ----------------------------------


def test_dominated_vertices_examples():
    assert dominated_vertices(Graph.path(3)) == [1]
    assert dominated_vertices(parse_graph(C4)) == []
    assert dominated_vertices(Graph.edgeless(2)) == []
    with pytest.raises(PreconditionError):
        dominated_vertices(Graph.edgeless(1))


def test_hypothesis_error_lists_labels():
    with pytest.raises(HypothesisError) as exc:
        check_hypothesis(Graph.path(3))
    assert exc.value.labels == ["2"]


@given(graphs(min_n=2))
def test_dominated_equals_isolated_in_complement(g):
    c = complement(g)
    assert dominated_vertices(g) == [i for i in range(g.n) if c.degree(i) == 0]


def test_join_decompose_examples():
    assert len(join_decompose(Graph.edgeless(2)).factors) == 1
    d = join_decompose(parse_graph(C4))
    assert [f.labels for f in d.factors] == [("1", "3"), ("2", "4")]
    assert all(f.edge_count() == 0 for f in d.factors)
    assert len(join_decompose(Graph.cycle(5)).factors) == 1


@given(graphs(min_n=2))
def test_join_decompose_round_trip(g):
    if dominated_vertices(g):
        return
    d = join_decompose(g)
    cover = sorted(i for s in d.factor_vertex_sets for i in s)
    assert cover == list(range(g.n))
    for f in d.factors:
        assert f.n >= 2 and complement_connected(f)
    for s, t in itertools.combinations(d.factor_vertex_sets, 2):
        assert all(g.adjacent(i, j) for i in s for j in t)
    rebuilt = join(*d.factors)
    assert sorted(rebuilt.labels) == sorted(g.labels)
    as_labels = lambda h: {frozenset((h.labels[i], h.labels[j])) for i, j in h.edges()}
    assert as_labels(rebuilt) == as_labels(g)


# -- removal -----------------------------------------------------------------


def test_select_removal_three_edgeless():
    step = select_removal(Graph.edgeless(3))
    # complement is a triangle; DFS from 0 visits 0-1-2 and the leaves are 0 and 2
    assert step.removed_vertex == 0 and step.k == 0


def test_select_removal_path():
    g = Graph.path(4)
    step = select_removal(g)
    assert complement_connected(g.delete(step.removed_vertex))


def test_select_removal_rejects():
    with pytest.raises(PreconditionError):
        select_removal(parse_graph(C4))
    with pytest.raises(PreconditionError):
        select_removal(Graph.edgeless(2))


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_select_removal_exhaustive(n):
    for g in all_graphs(n):
        if not complement_connected(g):
            continue
        step = select_removal(g)
        v = step.removed_vertex
        assert complement_is_connected(step.gamma_prime)
        assert step.gamma_prime == g.delete(v)
        expected = [g.labels[i] for i in g.neighbors(v)]
        assert list(step.gamma_k.labels) == expected
        assert step.k == len(expected) < step.gamma_prime.n


def test_all_graphs_count():
    for n in range(5):
        gs = list(all_graphs(n))
        assert len(gs) == 2 ** (n * (n - 1) // 2)
        assert len({g.adj for g in gs}) == len(gs)

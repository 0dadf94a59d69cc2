from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from brute import all_even_subsets, b1_spanning, removal_bridges
from spinsing.errors import InvalidGraph
from spinsing.graph import (
    JClass,
    bridges,
    contract_edges,
    cycle_rank,
    even_subsets,
    genus,
    graph_from_genera,
    is_even,
    is_tree_like,
    odd_vertices,
    validate_graph,
)
from strategies import stable_graphs


def dumbbell():
    return graph_from_genera([1, 1], [(0, 0), (0, 1), (1, 1)])


def test_single_smooth_vertex_is_valid():
    g = validate_graph([(0, 3)], [])
    assert genus(g) == 3


def test_rational_vertex_with_one_loop_is_unstable():
    with pytest.raises(InvalidGraph) as exc:
        validate_graph([(0, 0)], [(0, 0, 0)])
    assert "UnstableVertex" in exc.value.kinds


def test_two_vertex_tree_genus_is_additive():
    g = validate_graph([(0, 1), (1, 2)], [(0, 0, 1)])
    assert genus(g) == 3


def test_violations_are_all_reported():
    with pytest.raises(InvalidGraph) as exc:
        validate_graph([(0, 1), (1, 0, "JZero")], [])
    assert {"Disconnected", "BadDecoration", "UnstableVertex"} <= exc.value.kinds


def test_low_genus_and_unknown_endpoint():
    assert genus(validate_graph([(0, 1)], [(0, 0, 0)])) == 2
    with pytest.raises(InvalidGraph) as exc:
        validate_graph([(0, 1)], [])
    assert "GenusTooSmall" in exc.value.kinds
    with pytest.raises(InvalidGraph) as exc:
        validate_graph([(0, 2)], [(0, 0, 7)])
    assert "UnknownVertex" in exc.value.kinds


def test_tags_need_matching_genus():
    with pytest.raises(InvalidGraph) as exc:
        validate_graph([(0, 3, None, ["HyperellipticG2"])], [])
    assert "BadDecoration" in exc.value.kinds
    g = validate_graph([(0, 3, None, ["HyperellipticG3"])], [])
    assert g.vertex(0).decoration.j_class is JClass.NOT_APPLICABLE


def test_genus_one_defaults_to_generic():
    g = graph_from_genera([1, 3], [(0, 1)])
    assert g.vertex(0).decoration.j_class is JClass.GENERIC


@pytest.mark.parametrize(
    "genera, ends, expected",
    [([4], [], 4), ([1], [(0, 0)], 2), ([1, 1], [(0, 1), (0, 1)], 3)],
)
def test_genus_examples(genera, ends, expected):
    assert genus(graph_from_genera(genera, ends)) == expected


def test_tree_like_examples():
    assert is_tree_like(graph_from_genera([1], [(0, 0), (0, 0)]))
    assert not is_tree_like(graph_from_genera([1, 1], [(0, 1), (0, 1)]))
    assert is_tree_like(graph_from_genera([1, 1, 1], [(0, 1), (1, 2)]))


def test_even_subset_examples():
    tree = graph_from_genera([1, 1, 1], [(0, 1), (1, 2)])
    assert list(even_subsets(tree)) == [frozenset()]
    loop = graph_from_genera([1], [(0, 0)])
    assert set(even_subsets(loop)) == {frozenset(), frozenset({0})}
    subsets = list(even_subsets(dumbbell()))
    assert len(subsets) == 4
    assert all(1 not in s for s in subsets)


def test_contract_examples():
    g = graph_from_genera([1, 2], [(0, 1)])
    c = contract_edges(g, {0})
    assert [(v.genus) for v in c.vertices] == [3] and not c.edges
    loop = graph_from_genera([1, 3], [(0, 0), (0, 1)])
    c = contract_edges(loop, {0})
    assert c.vertex(0).genus == 2 and genus(c) == genus(loop)
    assert contract_edges(loop, set()) == loop


def test_contract_keeps_surviving_edges():
    g = graph_from_genera([1, 1, 1], [(0, 1), (1, 2), (2, 0), (0, 1)])
    c = contract_edges(g, {0, 1})
    assert len(c.vertices) == 1
    assert sorted(c.edge_ids) == [2, 3]
    assert all(e.is_loop for e in c.edges)
    assert genus(c) == genus(g)


def test_bridge_examples():
    path = graph_from_genera([1, 1, 1], [(0, 1), (1, 2)])
    assert bridges(path) == {0, 1}
    assert bridges(graph_from_genera([1, 1], [(0, 1), (0, 1)])) == set()
    assert bridges(dumbbell()) == {1}


def test_odd_vertices_and_parity():
    g = graph_from_genera([1, 1], [(0, 1), (0, 1)])
    assert odd_vertices(g, {0}) == [0, 1]
    assert is_even(g, {0, 1})
    assert cycle_rank(g, {0, 1}) == 1


@given(stable_graphs(max_edges=9))
def test_even_subsets_match_brute_force(g):
    found = list(even_subsets(g))
    assert len(found) == len(set(found)) == 2 ** g.b1
    assert set(found) == all_even_subsets(g)


@given(stable_graphs())
def test_bridges_match_removal_and_avoid_cycle_space(g):
    br = bridges(g)
    assert br == removal_bridges(g)
    assert all(not (s & br) for s in even_subsets(g))


@given(stable_graphs(), st.data())
def test_contraction_preserves_genus(g, data):
    subset = data.draw(st.sets(st.sampled_from(g.edge_ids))) if g.edges else set()
    c = contract_edges(g, subset)
    assert genus(c) == genus(g)
    assert len(c.edges) == len(g.edges) - len(subset)


@given(stable_graphs())
def test_tree_like_iff_every_non_loop_edge_is_a_bridge(g):
    br = bridges(g)
    assert is_tree_like(g) == all(e.is_loop or e.id in br for e in g.edges)
    assert g.b1 == b1_spanning(g)

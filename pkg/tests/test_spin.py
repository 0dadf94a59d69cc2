from __future__ import annotations

import pytest
from hypothesis import given

from brute import all_even_subsets, n_components, sigma_is_tree_like
from spinsing.errors import DeltaNotEven, InvalidGraph, NoSmoothSupport, UnknownId
from spinsing.graph import bridges, genus, graph_from_genera, is_tree_like
from spinsing.spin import (
    EdgeClass,
    audit_holds,
    construct_smooth_support,
    elliptic_tails,
    enumerate_supports,
    fiber_degree_audit,
    gluing_count,
    lifting_component_count,
    make_labels,
    make_support,
    sigma_graph,
)
from strategies import stable_graphs


def parallel(g0=1, g1=1):
    return graph_from_genera([g0, g1], [(0, 1), (0, 1)])


def test_parallel_pair_all_exceptional_is_non_disconnecting():
    s = make_support(parallel(), {0, 1})
    assert [s.edge_class[e] for e in (0, 1)] == [EdgeClass.NON_DISCONNECTING] * 2


def test_odd_complement_is_rejected():
    with pytest.raises(DeltaNotEven) as exc:
        make_support(parallel(), {0})
    assert set(exc.value.odd_vertices) == {0, 1}


def test_tail_bridge_is_tail_node():
    g = graph_from_genera([1, 3], [(0, 1)])
    assert make_support(g, {0}).edge_class[0] is EdgeClass.TAIL_NODE


def test_unknown_edge():
    with pytest.raises(UnknownId):
        make_support(parallel(), {0, 1, 5})


def test_singular_tail_is_an_elliptic_tail():
    g = graph_from_genera([0, 3], [(0, 0), (0, 1)])
    assert elliptic_tails(g) == {0: 1}
    s = make_support(g, {0, 1})
    assert s.edge_class[1] is EdgeClass.TAIL_NODE
    assert s.edge_class[0] is EdgeClass.NON_DISCONNECTING


def test_sigma_examples():
    g = parallel()
    full = make_support(g, {0, 1})
    assert sigma_graph(full) == g
    empty = make_support(g, set())
    sg = sigma_graph(empty)
    assert len(sg.vertices) == 1 and not sg.edges
    assert not is_tree_like(sigma_graph(full))
    assert len(sigma_graph(full).edges) == 2


def test_enumeration_examples():
    assert len(enumerate_supports(graph_from_genera([1, 1, 1], [(0, 1), (1, 2)]))) == 1
    assert len(enumerate_supports(graph_from_genera([1], [(0, 0)]))) == 2
    sups = enumerate_supports(parallel())
    assert {s.exceptional for s in sups} == {frozenset({0, 1}), frozenset()}


def test_gluing_examples():
    g = parallel()
    assert gluing_count(make_support(g, {0, 1})) == 1
    assert gluing_count(make_support(g, set())) == 2
    loops = graph_from_genera([1], [(0, 0), (0, 0)])
    assert gluing_count(make_support(loops, set())) == 4


@pytest.mark.parametrize(
    "genera, ends, value",
    [([4], [], 256), ([1, 2], [(0, 1), (0, 1)], 256), ([1], [(0, 0)], 16)],
)
def test_fiber_degree_examples(genera, ends, value):
    assert fiber_degree_audit(graph_from_genera(genera, ends)) == value


def test_smooth_support_examples():
    s = construct_smooth_support(parallel())
    assert s.exceptional == frozenset()
    tree = graph_from_genera([1, 1, 2], [(0, 0), (0, 1), (1, 2), (2, 2)])
    s = construct_smooth_support(tree)
    assert s.exceptional == frozenset(tree.edge_ids)
    assert sigma_graph(s) == tree


def test_smooth_support_theta_graph():
    # all three edges of the theta graph give odd degrees, so the support keeps one
    # edge exceptional; contracting the other two leaves a single loop
    theta = graph_from_genera([1, 1], [(0, 1), (0, 1), (0, 1)])
    s = construct_smooth_support(theta)
    assert len(s.exceptional) == 1
    sg = sigma_graph(s)
    assert len(sg.vertices) == 1 and is_tree_like(sg)


def test_labels_validation():
    g = graph_from_genera([1, 3], [(0, 1)], j_classes={0: "JZero"})
    s = make_support(g, {0})
    lab = make_labels(s, {0: True}, {0: "theta_a"})
    assert lab.flag(0) is True and lab.flag(1) is None
    assert lab.component_theta[0].label == "theta_a"
    with pytest.raises(InvalidGraph) as exc:
        make_labels(s, {1: True})
    assert "FlagOnNonElliptic" in exc.value.kinds
    with pytest.raises(InvalidGraph) as exc:
        make_labels(s, gluing_class=1)
    assert "GluingClassOutOfRange" in exc.value.kinds


@given(stable_graphs(max_edges=8))
def test_support_invariants(g):
    sups = enumerate_supports(g)
    assert len(sups) == 2 ** g.b1
    assert {s.delta for s in sups} == all_even_subsets(g)
    br = bridges(g)
    for s in sups:
        assert br <= s.exceptional
        assert set(s.edge_class) == set(g.edge_ids)
        sg = sigma_graph(s)
        assert set(sg.edge_ids) == s.exceptional
        assert genus(sg) == genus(g)
        assert lifting_component_count(s) == n_components(
            g.vertex_ids, [g.edge(e).ends for e in s.delta]
        )
        for e, cls in s.edge_class.items():
            assert (cls is EdgeClass.NON_EXCEPTIONAL) == (e in s.delta)
            assert (cls in (EdgeClass.TAIL_NODE, EdgeClass.DISCONNECTING)) == (e in br)


@given(stable_graphs(max_edges=10))
def test_fiber_degree_is_four_to_the_genus(g):
    assert fiber_degree_audit(g) == 4 ** genus(g)
    assert audit_holds(g)


@given(stable_graphs(max_edges=9))
def test_smooth_support_is_tree_like_or_provably_absent(g):
    try:
        s = construct_smooth_support(g)
    except NoSmoothSupport:
        assert not any(sigma_is_tree_like(g, d) for d in all_even_subsets(g))
    else:
        assert is_tree_like(sigma_graph(s))
        assert sigma_is_tree_like(g, s.delta)


def test_petersen_curve_has_no_tree_like_support():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    g = graph_from_genera([0] * 10, outer + spokes + inner)
    assert genus(g) == 6
    evens = all_even_subsets(g)
    assert len(evens) == 64
    assert not any(sigma_is_tree_like(g, d) for d in evens)
    with pytest.raises(NoSmoothSupport):
        construct_smooth_support(g)

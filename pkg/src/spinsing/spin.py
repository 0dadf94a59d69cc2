"""Spin supports: exceptional edge sets N with even complement, the graph
Sigma obtained by contracting the complement, and counting of spin structures.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import DeltaNotEven, InvalidGraph, NoSmoothSupport, UnknownId, Violation
from .graph import (
    DualGraph,
    EdgeId,
    VertexId,
    bridges,
    components,
    contract_edges,
    cycle_rank,
    even_subset_masks,
    genus,
    is_tree_like,
    mask_components,
    odd_vertices,
)


class EdgeClass(str, enum.Enum):
    TAIL_NODE = "TailNode"
    DISCONNECTING = "DisconnectingExceptional"
    NON_DISCONNECTING = "NonDiscExceptional"
    NON_EXCEPTIONAL = "NonExceptional"

    @property
    def short(self) -> str:
        return _SHORT[self]


_SHORT = {
    EdgeClass.TAIL_NODE: "T",
    EdgeClass.DISCONNECTING: "D",
    EdgeClass.NON_DISCONNECTING: "Nbar",
    EdgeClass.NON_EXCEPTIONAL: "Delta",
}


def elliptic_tails(graph: DualGraph) -> dict[VertexId, EdgeId]:
    """Vertices forming an arithmetic-genus-1 piece attached by a single node.

    By stability such a piece is one vertex: genus 1 with a single edge, or
    genus 0 with one loop and one further edge.
    """
    br = bridges(graph)
    tails = {}
    for v in graph.vertices:
        inc = graph.incident[v.id]
        through = [eid for eid in inc if not graph.edge(eid).is_loop]
        if len(through) == 1 and through[0] in br and v.genus + graph.loops_at(v.id) == 1:
            tails[v.id] = through[0]
    return tails


def smooth_elliptic_tails(graph: DualGraph) -> dict[VertexId, EdgeId]:
    """Elliptic tails whose component is smooth (genus 1, degree 1)."""
    return {v: e for v, e in elliptic_tails(graph).items() if graph.vertex(v).genus == 1}


@dataclass(frozen=True, eq=False)
class SpinSupport:
    graph: DualGraph
    exceptional: frozenset
    edge_class: Mapping[EdgeId, EdgeClass] = field(repr=False)

    def __eq__(self, other):
        if not isinstance(other, SpinSupport):
            return NotImplemented
        return self.graph == other.graph and self.exceptional == other.exceptional

    def __hash__(self):
        return hash((self.graph, self.exceptional))

    @property
    def delta(self) -> frozenset:
        return frozenset(self.graph.edge_ids) - self.exceptional

    def edges_of(self, cls: EdgeClass) -> tuple[EdgeId, ...]:
        return tuple(eid for eid in self.graph.edge_ids if self.edge_class[eid] is cls)

    @cached_property
    def sigma_components(self) -> list[list[VertexId]]:
        """Connected components of (vertices, Delta): the vertices of Sigma."""
        return components(self.graph, self.delta)

    @cached_property
    def sigma_vertex(self) -> dict[VertexId, VertexId]:
        """Map each vertex to the Sigma-vertex (first member id) containing it."""
        return {v: grp[0] for grp in self.sigma_components for v in grp}

    @cached_property
    def tail_vertices(self) -> dict[VertexId, EdgeId]:
        return elliptic_tails(self.graph)


def make_support(graph: DualGraph, exceptional: Iterable[EdgeId]) -> SpinSupport:
    N = frozenset(exceptional)
    for eid in N:
        if not graph.has_edge(eid):
            raise UnknownId("edge", eid)
    delta = [eid for eid in graph.edge_ids if eid not in N]
    odd = odd_vertices(graph, delta)
    if odd:
        raise DeltaNotEven(odd)

    br = bridges(graph)
    tail_edges = set(elliptic_tails(graph).values())
    cls = {}
    for eid in graph.edge_ids:
        if eid not in N:
            cls[eid] = EdgeClass.NON_EXCEPTIONAL
        elif eid in tail_edges:
            cls[eid] = EdgeClass.TAIL_NODE
        elif eid in br:
            cls[eid] = EdgeClass.DISCONNECTING
        else:
            cls[eid] = EdgeClass.NON_DISCONNECTING
    return SpinSupport(graph, N, cls)


def sigma_graph(support: SpinSupport) -> DualGraph:
    return contract_edges(support.graph, support.delta)


def enumerate_supports(graph: DualGraph) -> list[SpinSupport]:
    all_mask = (1 << len(graph.edges)) - 1
    return [make_support(graph, graph.subset_of(all_mask ^ m)) for m in even_subset_masks(graph)]


def gluing_count(support: SpinSupport) -> int:
    return 2 ** cycle_rank(support.graph, support.delta)


def lifting_component_count(support: SpinSupport) -> int:
    return len(support.sigma_components)


def fiber_degree_audit(graph: DualGraph) -> Fraction:
    """Weighted count of spin structures over the curve; equals 2^(2g).

    Per support the weight is gluings * 2^#N * 2^(1 - c) * prod 2^(2 g_v),
    with c the number of components of (vertices, Delta).
    """
    base = 2 ** (2 * sum(v.genus for v in graph.vertices))
    n_v, n_e = len(graph.vertices), len(graph.edges)
    total = Fraction(0)
    for m in even_subset_masks(graph):
        c = len(mask_components(graph, m))
        size = bin(m).count("1")
        gluings = 2 ** (size - n_v + c)
        total += gluings * 2 ** (n_e - size) * Fraction(2) ** (1 - c) * base
    return total


def construct_smooth_support(graph: DualGraph) -> SpinSupport:
    """A support whose Sigma graph is tree-like.

    First tries Delta = all non-loop edges lying on a cycle.  When that set is
    not even (three parallel edges, for instance) falls back to the largest
    even subset of non-loop edges whose contraction is tree-like.
    """
    br = bridges(graph)
    delta = [e.id for e in graph.edges if not e.is_loop and e.id not in br]
    if not odd_vertices(graph, delta):
        s = make_support(graph, set(graph.edge_ids) - set(delta))
        assert is_tree_like(sigma_graph(s))
        return s

    loop_mask = graph.mask_of(e.id for e in graph.edges if e.is_loop)
    all_mask = (1 << len(graph.edges)) - 1
    candidates = sorted(
        {m & ~loop_mask for m in even_subset_masks(graph)},
        key=lambda m: (-bin(m).count("1"), m),
    )
    for m in candidates:
        s = make_support(graph, graph.subset_of(all_mask ^ m))
        if is_tree_like(sigma_graph(s)):
            return s
    raise NoSmoothSupport("no even subset contracts the graph to a tree-like graph")


@dataclass(frozen=True)
class ThetaLabel:
    label: str = "theta"
    trivial_on_elliptic: bool | None = None


@dataclass(frozen=True)
class SpinStructureLabel:
    component_theta: Mapping[VertexId, ThetaLabel]
    gluing_class: int = 0

    def flag(self, vid: VertexId) -> bool | None:
        t = self.component_theta.get(vid)
        return None if t is None else t.trivial_on_elliptic


def make_labels(
    support: SpinSupport,
    trivial: Mapping[VertexId, bool] | None = None,
    labels: Mapping[VertexId, str] | None = None,
    gluing_class: int = 0,
) -> SpinStructureLabel:
    """Validated labels; flags may only sit on genus-1 vertices."""
    trivial = dict(trivial or {})
    labels = dict(labels or {})
    graph = support.graph
    bad = []
    for vid in list(trivial) + list(labels):
        if not graph.has_vertex(vid):
            raise UnknownId("vertex", vid)
    for vid in trivial:
        if graph.vertex(vid).genus != 1:
            bad.append(Violation("FlagOnNonElliptic", vid))
    if not 0 <= gluing_class < gluing_count(support):
        bad.append(Violation("GluingClassOutOfRange", gluing_class))
    if bad:
        raise InvalidGraph(bad)
    theta = {
        v.id: ThetaLabel(labels.get(v.id, "theta"), trivial.get(v.id))
        for v in graph.vertices
    }
    return SpinStructureLabel(theta, gluing_class)


def audit_holds(graph: DualGraph) -> bool:
    return fiber_degree_audit(graph) == 2 ** (2 * genus(graph))

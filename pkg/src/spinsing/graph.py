"""Decorated dual graphs of stable curves.

Vertices are irreducible components carrying a geometric genus and a
decoration, edges are nodes.  Loops and parallel edges are allowed; a loop
counts twice toward the degree of its vertex.  Edge subsets are exchanged as
``frozenset`` of edge ids; internally they are bitmasks over edge positions.
"""

from __future__ import annotations

import enum
from collections.abc import Hashable, Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from .errors import InvalidGraph, Violation

VertexId = Hashable
EdgeId = Hashable


class JClass(str, enum.Enum):
    GENERIC = "Generic"
    J_ZERO = "JZero"
    J_1728 = "J1728"
    NOT_APPLICABLE = "NotApplicable"


class Tag(str, enum.Enum):
    HYPERELLIPTIC_G2 = "HyperellipticG2"
    HYPERELLIPTIC_G3 = "HyperellipticG3"
    BIELLIPTIC_G2 = "BiellipticG2"


_TAG_GENUS = {Tag.HYPERELLIPTIC_G2: 2, Tag.BIELLIPTIC_G2: 2, Tag.HYPERELLIPTIC_G3: 3}


@dataclass(frozen=True)
class VertexDecoration:
    j_class: JClass = JClass.NOT_APPLICABLE
    tags: frozenset[Tag] = frozenset()

    @staticmethod
    def default(genus: int) -> VertexDecoration:
        return VertexDecoration(JClass.GENERIC if genus == 1 else JClass.NOT_APPLICABLE)


@dataclass(frozen=True)
class Vertex:
    id: VertexId
    genus: int
    decoration: VertexDecoration


@dataclass(frozen=True)
class Edge:
    id: EdgeId
    ends: tuple[VertexId, VertexId]

    @property
    def is_loop(self) -> bool:
        return self.ends[0] == self.ends[1]

    def other(self, v: VertexId) -> VertexId:
        a, b = self.ends
        return b if v == a else a


@dataclass(frozen=True, eq=False)
class DualGraph:
    """Validated, immutable decorated multigraph.  Build with ``validate_graph``."""

    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self,
            "_index",
            {
                "v": {v.id: i for i, v in enumerate(self.vertices)},
                "e": {e.id: i for i, e in enumerate(self.edges)},
            },
        )

    def __eq__(self, other):
        if not isinstance(other, DualGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.vertices, self.edges))

    # lookups
    @property
    def vertex_ids(self) -> tuple[VertexId, ...]:
        return tuple(v.id for v in self.vertices)

    @property
    def edge_ids(self) -> tuple[EdgeId, ...]:
        return tuple(e.id for e in self.edges)

    def vertex(self, vid: VertexId) -> Vertex:
        return self.vertices[self._index["v"][vid]]

    def edge(self, eid: EdgeId) -> Edge:
        return self.edges[self._index["e"][eid]]

    def vertex_pos(self, vid: VertexId) -> int:
        return self._index["v"][vid]

    def edge_pos(self, eid: EdgeId) -> int:
        return self._index["e"][eid]

    def has_vertex(self, vid) -> bool:
        return vid in self._index["v"]

    def has_edge(self, eid) -> bool:
        return eid in self._index["e"]

    # degree data
    @cached_property
    def degrees(self) -> dict[VertexId, int]:
        deg = {v.id: 0 for v in self.vertices}
        for e in self.edges:
            deg[e.ends[0]] += 1
            deg[e.ends[1]] += 1
        return deg

    def degree(self, vid: VertexId) -> int:
        return self.degrees[vid]

    @cached_property
    def incident(self) -> dict[VertexId, tuple[EdgeId, ...]]:
        inc: dict = {v.id: [] for v in self.vertices}
        for e in self.edges:
            inc[e.ends[0]].append(e.id)
            if not e.is_loop:
                inc[e.ends[1]].append(e.id)
        return {k: tuple(v) for k, v in inc.items()}

    def loops_at(self, vid: VertexId) -> int:
        return sum(1 for eid in self.incident[vid] if self.edge(eid).is_loop)

    @property
    def b1(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    @property
    def genus(self) -> int:
        return genus(self)

    # subset <-> mask
    def mask_of(self, subset: Iterable[EdgeId]) -> int:
        m = 0
        for eid in subset:
            m |= 1 << self._index["e"][eid]
        return m

    def subset_of(self, mask: int) -> frozenset:
        return frozenset(e.id for i, e in enumerate(self.edges) if mask >> i & 1)


def _coerce_vertex(raw) -> Vertex:
    if isinstance(raw, Vertex):
        return raw
    vid, g, *rest = raw
    j = rest[0] if rest else None
    tags = rest[1] if len(rest) > 1 else ()
    if isinstance(j, VertexDecoration):
        return Vertex(vid, g, j)
    jc = JClass(j) if j is not None else (JClass.GENERIC if g == 1 else JClass.NOT_APPLICABLE)
    return Vertex(vid, g, VertexDecoration(jc, frozenset(Tag(t) for t in tags)))


def _coerce_edge(raw) -> Edge:
    if isinstance(raw, Edge):
        return raw
    eid, a, b = raw
    return Edge(eid, (a, b))


def validate_graph(vertices: Iterable, edges: Iterable) -> DualGraph:
    """Build a ``DualGraph`` from raw lists, raising ``InvalidGraph`` on failure.

    Vertices may be ``Vertex`` objects or tuples ``(id, genus[, j_class[, tags]])``;
    edges may be ``Edge`` objects or tuples ``(id, end_a, end_b)``.
    """
    vs = tuple(_coerce_vertex(v) for v in vertices)
    es = tuple(_coerce_edge(e) for e in edges)
    bad: list[Violation] = []

    ids = [v.id for v in vs]
    if len(set(ids)) != len(ids):
        bad.append(Violation("DuplicateVertex"))
    if len({e.id for e in es}) != len(es):
        bad.append(Violation("DuplicateEdge"))
    known = set(ids)
    for e in es:
        for end in e.ends:
            if end not in known:
                bad.append(Violation("UnknownVertex", end))
    if not vs:
        bad.append(Violation("Empty"))
    if bad:
        raise InvalidGraph(bad)

    for v in vs:
        if v.genus < 0:
            bad.append(Violation("NegativeGenus", v.id))
        d = v.decoration
        if (d.j_class != JClass.NOT_APPLICABLE) != (v.genus == 1):
            bad.append(Violation("BadDecoration", v.id))
        elif any(_TAG_GENUS[t] != v.genus for t in d.tags):
            bad.append(Violation("BadDecoration", v.id))

    graph = DualGraph(vs, es)
    if len(mask_components(graph, graph.mask_of(graph.edge_ids))) != 1:
        bad.append(Violation("Disconnected"))
    for v in vs:
        deg = graph.degree(v.id)
        if (v.genus == 0 and deg < 3) or (v.genus == 1 and deg < 1):
            bad.append(Violation("UnstableVertex", v.id))
    if genus(graph) < 2:
        bad.append(Violation("GenusTooSmall"))
    if bad:
        raise InvalidGraph(bad)
    return graph


def graph_from_genera(
    genera: Sequence[int],
    ends: Sequence[tuple[int, int]],
    j_classes: dict[int, str] | None = None,
    tags: dict[int, Sequence[str]] | None = None,
) -> DualGraph:
    """Shorthand with vertex ids ``0..n-1`` and edge ids ``0..m-1``."""
    j_classes = j_classes or {}
    tags = tags or {}
    return validate_graph(
        [(i, g, j_classes.get(i), tags.get(i, ())) for i, g in enumerate(genera)],
        [(k, a, b) for k, (a, b) in enumerate(ends)],
    )


def genus(graph: DualGraph) -> int:
    return sum(v.genus for v in graph.vertices) + graph.b1


def mask_components(graph: DualGraph, mask: int) -> list[list[VertexId]]:
    """Connected components of (vertices, edges in mask), in vertex order."""
    parent = {v.id: v.id for v in graph.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, e in enumerate(graph.edges):
        if mask >> i & 1:
            ra, rb = find(e.ends[0]), find(e.ends[1])
            if ra != rb:
                # keep the earlier vertex as root so representatives are stable
                if graph.vertex_pos(ra) < graph.vertex_pos(rb):
                    parent[rb] = ra
                else:
                    parent[ra] = rb
    groups: dict = {}
    for v in graph.vertices:
        groups.setdefault(find(v.id), []).append(v.id)
    return list(groups.values())


def components(graph: DualGraph, subset: Iterable[EdgeId]) -> list[list[VertexId]]:
    """Connected components of the spanning subgraph with the given edges."""
    return mask_components(graph, graph.mask_of(subset))


def cycle_rank(graph: DualGraph, subset: Iterable[EdgeId]) -> int:
    """b1 of the spanning subgraph (all vertices, given edges)."""
    subset = frozenset(subset)
    return len(subset) - len(graph.vertices) + len(components(graph, subset))


def is_tree_like(graph: DualGraph) -> bool:
    non_loops = [e.id for e in graph.edges if not e.is_loop]
    return len(non_loops) == len(graph.vertices) - 1 and len(components(graph, non_loops)) == 1


def cycle_basis_masks(graph: DualGraph) -> list[int]:
    """A basis of the cycle space over GF(2) as edge bitmasks.

    Each loop is its own basis cycle; every non-tree edge of a BFS spanning
    tree closes one fundamental cycle.
    """
    parent_edge: dict = {}
    depth: dict = {}
    root = graph.vertices[0].id
    depth[root] = 0
    order = [root]
    tree = 0
    for vid in order:
        for eid in graph.incident[vid]:
            e = graph.edge(eid)
            w = e.other(vid)
            if e.is_loop or w in depth:
                continue
            depth[w] = depth[vid] + 1
            parent_edge[w] = eid
            tree |= 1 << graph.edge_pos(eid)
            order.append(w)

    basis = []
    for i, e in enumerate(graph.edges):
        if e.is_loop:
            basis.append(1 << i)
        elif not tree >> i & 1:
            m = 1 << i
            a, b = e.ends
            while a != b:
                if depth[a] < depth[b]:
                    a, b = b, a
                pe = parent_edge[a]
                m ^= 1 << graph.edge_pos(pe)
                a = graph.edge(pe).other(a)
            basis.append(m)
    return basis


def even_subset_masks(graph: DualGraph) -> list[int]:
    """All cycle-space members as bitmasks; index bits select basis cycles."""
    basis = cycle_basis_masks(graph)
    out = [0]
    for b in basis:
        out += [m ^ b for m in out]
    return out


def even_subsets(graph: DualGraph) -> Iterator[frozenset]:
    """Yield every edge subset with even degree at each vertex (2^b1 of them)."""
    for m in even_subset_masks(graph):
        yield graph.subset_of(m)


def is_even(graph: DualGraph, subset: Iterable[EdgeId]) -> bool:
    return not odd_vertices(graph, subset)


def odd_vertices(graph: DualGraph, subset: Iterable[EdgeId]) -> list[VertexId]:
    par = {v.id: 0 for v in graph.vertices}
    for eid in subset:
        e = graph.edge(eid)
        if not e.is_loop:
            par[e.ends[0]] ^= 1
            par[e.ends[1]] ^= 1
    return [v for v, p in par.items() if p]


def bridges(graph: DualGraph) -> frozenset:
    """Non-loop edges whose removal disconnects the graph (lowlink DFS)."""
    disc: dict = {}
    low: dict = {}
    found = set()
    counter = 0
    root = graph.vertices[0].id
    # iterative DFS; the stack holds (vertex, edge used to enter, iterator)
    disc[root] = low[root] = counter
    stack = [(root, None, iter(graph.incident[root]))]
    while stack:
        v, via, it = stack[-1]
        advanced = False
        for eid in it:
            e = graph.edge(eid)
            if e.is_loop or eid == via:
                continue
            w = e.other(v)
            if w in disc:
                low[v] = min(low[v], disc[w])
            else:
                counter += 1
                disc[w] = low[w] = counter
                stack.append((w, eid, iter(graph.incident[w])))
                advanced = True
                break
        if not advanced:
            stack.pop()
            if stack:
                parent = stack[-1][0]
                low[parent] = min(low[parent], low[v])
                if low[v] > disc[parent]:
                    found.add(via)
    return frozenset(found)


def contract_edges(graph: DualGraph, subset: Iterable[EdgeId]) -> DualGraph:
    """Contract the given edges; contracted loops and cycles turn into genus.

    The merged vertex keeps the id of its first member in vertex order.  A
    vertex whose class is a singleton with no contracted loop keeps its
    decoration; merged vertices get the default decoration for their genus.
    """
    subset = frozenset(subset)
    groups = components(graph, subset)
    rep = {}
    for grp in groups:
        for vid in grp:
            rep[vid] = grp[0]
    internal = {grp[0]: 0 for grp in groups}
    for eid in subset:
        internal[rep[graph.edge(eid).ends[0]]] += 1

    rep_order = sorted(internal, key=graph.vertex_pos)
    members = {grp[0]: grp for grp in groups}
    new_vertices = []
    for r in rep_order:
        grp = members[r]
        g = sum(graph.vertex(v).genus for v in grp) + internal[r] - (len(grp) - 1)
        if len(grp) == 1 and internal[r] == 0:
            new_vertices.append(graph.vertex(r))
        else:
            new_vertices.append(Vertex(r, g, VertexDecoration.default(g)))
    new_edges = [
        Edge(e.id, (rep[e.ends[0]], rep[e.ends[1]])) for e in graph.edges if e.id not in subset
    ]
    return DualGraph(tuple(new_vertices), tuple(new_edges))

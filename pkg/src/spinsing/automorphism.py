"""Automorphism data of stable curves, their spin lifts and coordinate actions."""

from __future__ import annotations

import re
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .errors import IncompatibleDatum, InconsistentSquareRoot, UnknownId, WrongLevel
from .graph import DualGraph, EdgeId, JClass, Tag, VertexId
from .monomial import (
    CoordinateSystem,
    Level,
    MonomialAction,
    RootOfUnity,
    as_fraction,
    eigen_exponents,
)
from .spin import EdgeClass, SpinStructureLabel, SpinSupport, elliptic_tails

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ComponentType:
    kind: str
    order: int = 1

    KINDS = ("Identity", "Elliptic", "RationalOrder", "HyperellipticG2", "HyperellipticG3", "BiellipticG2")

    def __post_init__(self):
        allowed = {
            "Identity": {1},
            "Elliptic": {2, 3, 4, 6},
            "RationalOrder": {2, 4},
            "HyperellipticG2": {2},
            "HyperellipticG3": {2},
            "BiellipticG2": {2},
        }
        if self.kind not in allowed or self.order not in allowed[self.kind]:
            raise ValueError(f"unknown component type {self.kind}({self.order})")

    @classmethod
    def parse(cls, text: str) -> ComponentType:
        m = re.fullmatch(r"\s*(\w+)\s*(?:\(\s*(\d+)\s*\))?\s*", text)
        if not m:
            raise ValueError(f"cannot parse component type {text!r}")
        kind, order = m.group(1), m.group(2)
        if order is None:
            order = 1 if kind == "Identity" else 2
        return cls(kind, int(order))

    def __str__(self) -> str:
        if self.kind in ("Elliptic", "RationalOrder"):
            return f"{self.kind}({self.order})"
        return self.kind

    @property
    def is_identity(self) -> bool:
        return self.kind == "Identity"


IDENTITY = ComponentType("Identity")


def Elliptic(n: int) -> ComponentType:
    return ComponentType("Elliptic", n)


def RationalOrder(n: int) -> ComponentType:
    return ComponentType("RationalOrder", n)


HYPERELLIPTIC_G2 = ComponentType("HyperellipticG2", 2)
HYPERELLIPTIC_G3 = ComponentType("HyperellipticG3", 2)
BIELLIPTIC_G2 = ComponentType("BiellipticG2", 2)

# most fixed points an automorphism of each type can have on the normalization
_MAX_FIXED = {
    ("Elliptic", 2): 4,
    ("Elliptic", 3): 3,
    ("Elliptic", 4): 2,
    ("Elliptic", 6): 1,
    ("RationalOrder", 2): 2,
    ("RationalOrder", 4): 2,
    ("HyperellipticG2", 2): 6,
    ("HyperellipticG3", 2): 8,
    ("BiellipticG2", 2): 2,
}


def tangent_exponent(ctype: ComponentType) -> Fraction:
    """Exponent of the tangent action at a fixed marked point."""
    if ctype.is_identity:
        return Fraction(0)
    if ctype == Elliptic(6):
        # a primitive sixth root whose square is the order-3 block exponent 2/3
        return Fraction(5, 6)
    return Fraction(1, ctype.order)


@dataclass(frozen=True, eq=False)
class AutomorphismDatum:
    graph: DualGraph
    vertex_perm: Mapping[VertexId, VertexId]
    edge_perm: Mapping[EdgeId, EdgeId]
    component_type: Mapping[VertexId, ComponentType]
    node_scalar_t: Mapping[EdgeId, RootOfUnity]
    block_exponents: Mapping[VertexId, tuple[Fraction, ...]]
    swapped_loops: frozenset = frozenset()
    name: str = ""

    @property
    def fixes_everything(self) -> bool:
        return all(self.vertex_perm[v] == v for v in self.vertex_perm) and all(
            self.edge_perm[e] == e for e in self.edge_perm
        )

    @property
    def is_identity(self) -> bool:
        return (
            self.fixes_everything
            and all(t.is_identity for t in self.component_type.values())
            and not any(r.exponent for r in self.node_scalar_t.values())
            and not any(x for b in self.block_exponents.values() for x in b)
        )

    def t_action(self, coords: CoordinateSystem | None = None) -> MonomialAction:
        coords = coords or CoordinateSystem.build(self.graph, Level.T)
        return _assemble(coords, self, {e: r.exponent for e, r in self.node_scalar_t.items()})

    def __repr__(self) -> str:
        label = self.name or "datum"
        types = {v: str(t) for v, t in self.component_type.items() if not t.is_identity}
        return f"AutomorphismDatum({label}, types={types})"


def _assemble(coords: CoordinateSystem, datum: AutomorphismDatum, node_exps) -> MonomialAction:
    perm = [0] * coords.dim
    exps = [Fraction(0)] * coords.dim
    for eid in coords.graph.edge_ids:
        i = coords.node_slot(eid)
        perm[i] = coords.node_slot(datum.edge_perm[eid])
        exps[i] = node_exps[eid]
    for vid in coords.graph.vertex_ids:
        src = coords.block(vid)
        dst = coords.block(datum.vertex_perm[vid])
        for k, i in enumerate(src):
            perm[i] = dst[k]
            exps[i] = datum.block_exponents[vid][k]
    return MonomialAction(coords, tuple(perm), tuple(exps))


def _check_perm(ids, mapping, what) -> dict:
    mapping = dict(mapping or {})
    for k, v in mapping.items():
        if k not in ids:
            raise UnknownId(what, k)
        if v not in ids:
            raise UnknownId(what, v)
    full = {i: mapping.get(i, i) for i in ids}
    if set(full.values()) != set(ids):
        raise IncompatibleDatum(f"{what} map is not a bijection")
    return full


def _branch_profile(graph, vid, vperm, eperm, swapped_loops):
    """(fixed branches, moved branches, swapped loops) at a fixed vertex."""
    fixed = moved = swapped = 0
    for eid in graph.incident[vid]:
        e = graph.edge(eid)
        if e.is_loop:
            if eperm[eid] != eid:
                moved += 2
            elif eid in swapped_loops:
                swapped += 1
            else:
                fixed += 2
        elif eperm[eid] == eid:
            fixed += 1
        else:
            moved += 1
    return fixed, moved, swapped


def default_block(ctype: ComponentType, dim: int, fixed: int, moved: int, swapped: int) -> tuple:
    """Default eigenvalue exponents on a fixed component's deformation block.

    Invariant dimensions come from the quotient curve; the non-invariant part
    uses the smallest contributions compatible with the type.
    """
    h = _HALF
    s = swapped + moved // 2
    kind, n = ctype.kind, ctype.order
    if kind == "Identity":
        out = [0] * dim
    elif kind == "Elliptic" and n == 2:
        out = [0] * s + [h] * s if fixed == 0 else [0] * (1 + s) + [h] * (fixed + s - 1)
    elif kind == "Elliptic" and n == 3:
        q = moved // 3
        out = [0] * q + [Fraction(2, 3)] * (dim - q)
    elif kind == "Elliptic" and n == 4:
        out = ([h] + [Fraction(1, 4)] * (dim - 1)) if dim else []
    elif kind == "Elliptic" and n == 6:
        out = ([Fraction(2, 3)] + [h] * (dim - 1)) if dim else []
    elif kind == "RationalOrder" and n == 2:
        out = [0] * (s - 1) + [h] * (fixed + s - 2)
    elif kind == "RationalOrder" and n == 4:
        q = moved // 4
        cyc = (Fraction(1, 4), h, Fraction(3, 4))
        out = [0] * max(q - 1, 0)
        out += [cyc[i % 3] for i in range(dim - len(out))]
    elif kind == "HyperellipticG2":
        out = [0] * (3 + s) + [h] * (fixed + s)
    elif kind == "HyperellipticG3":
        out = [0] * (5 + s) + [h] * (1 + fixed + s)
    else:  # BiellipticG2
        out = [0] * (2 + s) + [h] * (1 + fixed + s)
    if len(out) != dim or any(isinstance(x, int) and x < 0 for x in out):
        raise IncompatibleDatum(f"{ctype} cannot act on a block of dimension {dim} with this branch data")
    return tuple(Fraction(x) for x in out)


def _check_decoration(graph: DualGraph, vid, ctype: ComponentType):
    v = graph.vertex(vid)
    d = v.decoration
    ok = True
    if ctype.kind == "Elliptic":
        ok = v.genus == 1
        if ctype.order in (3, 6):
            ok = ok and d.j_class == JClass.J_ZERO
        elif ctype.order == 4:
            ok = ok and d.j_class == JClass.J_1728
    elif ctype.kind == "RationalOrder":
        ok = v.genus == 0
    elif ctype.kind == "HyperellipticG2":
        ok = Tag.HYPERELLIPTIC_G2 in d.tags
    elif ctype.kind == "HyperellipticG3":
        ok = Tag.HYPERELLIPTIC_G3 in d.tags
    elif ctype.kind == "BiellipticG2":
        ok = Tag.BIELLIPTIC_G2 in d.tags
    if not ok:
        raise IncompatibleDatum(f"type {ctype} does not match the decoration of vertex {vid!r}")


def make_datum(
    graph: DualGraph,
    vertex_perm: Mapping | None = None,
    edge_perm: Mapping | None = None,
    component_type: Mapping | None = None,
    node_scalar_t: Mapping | None = None,
    block_exponents: Mapping | None = None,
    swapped_loops: Iterable[EdgeId] = (),
    name: str = "",
) -> AutomorphismDatum:
    """Validate an automorphism datum and fill defaults for everything omitted.

    Types may be ``ComponentType`` values or strings such as ``"Elliptic(3)"``;
    scalars may be ``RootOfUnity``, ``Fraction`` or ``"p/q"`` strings.
    """
    vperm = _check_perm(graph.vertex_ids, vertex_perm, "vertex")
    eperm = _check_perm(graph.edge_ids, edge_perm, "edge")
    for e in graph.edges:
        img = graph.edge(eperm[e.id]).ends
        if Counter(img) != Counter(vperm[x] for x in e.ends):
            raise IncompatibleDatum(f"edge {e.id!r} does not map onto the image of its endpoints")

    swapped = frozenset(swapped_loops)
    for eid in swapped:
        if not graph.has_edge(eid):
            raise UnknownId("edge", eid)
        if not graph.edge(eid).is_loop or eperm[eid] != eid:
            raise IncompatibleDatum(f"edge {eid!r} is not a fixed loop")

    types = {}
    for vid, t in (component_type or {}).items():
        if not graph.has_vertex(vid):
            raise UnknownId("vertex", vid)
        types[vid] = t if isinstance(t, ComponentType) else ComponentType.parse(t)
    types = {vid: types.get(vid, IDENTITY) for vid in graph.vertex_ids}
    for vid, t in types.items():
        if types[vperm[vid]] != t:
            raise IncompatibleDatum(f"component type is not constant on the orbit of {vid!r}")
        if not t.is_identity:
            _check_decoration(graph, vid, t)
    # loops on fixed rational components swap their branches unless told otherwise
    if not swapped_loops:
        swapped = frozenset(
            e.id
            for e in graph.edges
            if e.is_loop
            and eperm[e.id] == e.id
            and vperm[e.ends[0]] == e.ends[0]
            and types[e.ends[0]].kind == "RationalOrder"
        )

    blocks = {}
    overrides = dict(block_exponents or {})
    for vid in graph.vertex_ids:
        dim = 3 * graph.vertex(vid).genus - 3 + graph.degree(vid)
        t = types[vid]
        if vperm[vid] == vid:
            f, mv, sw = _branch_profile(graph, vid, vperm, eperm, swapped)
            if t.is_identity and (mv or sw):
                raise IncompatibleDatum(f"vertex {vid!r} is fixed with permuted branches but has type Identity")
            if f > _MAX_FIXED.get((t.kind, t.order), f):
                raise IncompatibleDatum(f"{t} cannot fix {f} marked points on {vid!r}")
        if vid in overrides:
            b = tuple(as_fraction(x) % 1 for x in overrides[vid])
            if len(b) != dim:
                raise IncompatibleDatum(f"block of {vid!r} needs {dim} exponents")
            if any(t.order % x.denominator for x in b):
                raise IncompatibleDatum(f"block exponents of {vid!r} must have denominators dividing {t.order}")
            blocks[vid] = b
        elif vperm[vid] != vid:
            blocks[vid] = (Fraction(0),) * dim
        else:
            blocks[vid] = default_block(t, dim, f, mv, sw)

    scalars = {}
    given = dict(node_scalar_t or {})
    for eid in given:
        if not graph.has_edge(eid):
            raise UnknownId("edge", eid)
    for e in graph.edges:
        a, b = e.ends
        fixed_ends = vperm[a] == a and vperm[b] == b
        if e.id in given:
            r = RootOfUnity(as_fraction(given[e.id]))
            if eperm[e.id] == e.id and fixed_ends and e.id not in swapped:
                bound = lcm(types[a].order, types[b].order)
                if bound % r.order:
                    raise IncompatibleDatum(f"scalar {r} on edge {e.id!r} exceeds the endpoint orders")
            scalars[e.id] = r
        elif eperm[e.id] != e.id or not fixed_ends or e.id in swapped:
            scalars[e.id] = RootOfUnity(0)
        else:
            scalars[e.id] = RootOfUnity(tangent_exponent(types[a]) + tangent_exponent(types[b]))

    return AutomorphismDatum(graph, vperm, eperm, types, scalars, blocks, swapped, name)


def identity_datum(graph: DualGraph) -> AutomorphismDatum:
    return make_datum(graph, name="identity")


def eta_datum(graph: DualGraph, vertex: VertexId, order: int = 2, name: str = "") -> AutomorphismDatum:
    """The elliptic tail automorphism of the given order on one tail vertex."""
    tails = elliptic_tails(graph)
    if vertex not in tails:
        raise IncompatibleDatum(f"vertex {vertex!r} is not an elliptic tail")
    g = graph.vertex(vertex).genus
    if g == 0:
        if order != 2:
            raise IncompatibleDatum("a singular elliptic tail only carries the order-2 automorphism")
        ctype = RationalOrder(2)
    else:
        ctype = Elliptic(order)
    return make_datum(graph, component_type={vertex: ctype}, name=name or f"eta{order}@{vertex}")


def eta_order(datum: AutomorphismDatum) -> tuple[VertexId, int] | None:
    """(vertex, order) when the datum acts only on a single elliptic tail."""
    if not datum.fixes_everything:
        return None
    moved = [v for v, t in datum.component_type.items() if not t.is_identity]
    if len(moved) != 1:
        return None
    (v,) = moved
    tails = elliptic_tails(datum.graph)
    if v not in tails:
        return None
    t = datum.component_type[v]
    if t.kind == "Elliptic" or (t.kind == "RationalOrder" and t.order == 2):
        touched = set(datum.graph.incident[v])
        if any(r.exponent for e, r in datum.node_scalar_t.items() if e not in touched):
            return None
        return v, t.order
    return None


def is_eta2(datum: AutomorphismDatum) -> bool:
    eta = eta_order(datum)
    return eta is not None and eta[1] == 2


def preserves_support(support: SpinSupport, datum: AutomorphismDatum) -> bool:
    if datum.graph != support.graph:
        raise IncompatibleDatum("datum belongs to a different graph")
    return all((datum.edge_perm[e] in support.exceptional) == (e in support.exceptional) for e in datum.edge_perm)


def lifting_count(support: SpinSupport, datum: AutomorphismDatum, liftable: bool) -> int:
    """Number of spin automorphisms over the datum: 0 or 2^(#components of X~)."""
    if not preserves_support(support, datum) or not liftable:
        return 0
    return 2 ** len(support.sigma_components)


def resolve_liftable(
    support: SpinSupport,
    labels: SpinStructureLabel | None,
    datum: AutomorphismDatum,
    declared: bool,
) -> bool:
    """Apply the two liftability rules that are decidable combinatorially.

    Order-2 tail automorphisms always lift.  Order-3 and order-6 tail
    automorphisms lift exactly when the theta characteristic on the tail is
    trivial; if the flag is absent the caller's declaration stands.
    """
    if not preserves_support(support, datum):
        return False
    eta = eta_order(datum)
    if eta is not None:
        v, n = eta
        if n == 2:
            return True
        if n in (3, 6) and labels is not None and labels.flag(v) is not None:
            return bool(labels.flag(v))
    return bool(declared)


def automatic_lifts(support: SpinSupport, labels: SpinStructureLabel | None) -> list[AutomorphismDatum]:
    """Tail automorphisms known to lift: order 2 on every elliptic tail, and
    order 3 on each smooth j=0 tail whose theta characteristic is trivial."""
    out = []
    graph = support.graph
    for v in elliptic_tails(graph):
        out.append(eta_datum(graph, v, 2))
        vert = graph.vertex(v)
        if (
            vert.genus == 1
            and vert.decoration.j_class == JClass.J_ZERO
            and labels is not None
            and labels.flag(v)
        ):
            out.append(eta_datum(graph, v, 3))
    return out


@dataclass(frozen=True, eq=False)
class SpinAutomorphismDatum:
    base: AutomorphismDatum
    node_scalar_tau: Mapping[EdgeId, RootOfUnity]
    inessential_part: Mapping[VertexId, int] = field(default_factory=dict)


def make_spin_datum(
    support: SpinSupport,
    base: AutomorphismDatum,
    node_scalar_tau: Mapping | None = None,
    inessential: Mapping | None = None,
) -> SpinAutomorphismDatum:
    """Lift data over ``base``; tau scalars default to the principal square root."""
    if not preserves_support(support, base):
        raise IncompatibleDatum("automorphism does not preserve the exceptional edge set")
    given = dict(node_scalar_tau or {})
    tau = {}
    for eid in support.exceptional:
        t = base.node_scalar_t[eid]
        if eid in given:
            c = RootOfUnity(as_fraction(given[eid]))
            if c * c != t:
                raise InconsistentSquareRoot(f"tau scalar {c} on edge {eid!r} does not square to {t}")
        else:
            c = RootOfUnity(t.exponent / 2)
        tau[eid] = c
    for eid in given:
        if eid not in support.exceptional:
            raise InconsistentSquareRoot(f"edge {eid!r} is not exceptional and has no tau scalar")
    bits = {}
    reps = set(support.sigma_vertex.values())
    for k, b in (inessential or {}).items():
        if k not in reps:
            raise UnknownId("sigma vertex", k)
        bits[k] = int(b) & 1
    return SpinAutomorphismDatum(base, tau, bits)


def tau_action(support: SpinSupport, spin: SpinAutomorphismDatum) -> MonomialAction:
    coords = CoordinateSystem.for_support(support, Level.TAU)
    base = spin.base
    sv = support.sigma_vertex
    gamma = spin.inessential_part
    node = {}
    for e in support.graph.edges:
        if e.id in support.exceptional:
            flip = gamma.get(sv[e.ends[0]], 0) + gamma.get(sv[e.ends[1]], 0)
            node[e.id] = spin.node_scalar_tau[e.id].exponent + Fraction(flip, 2)
        else:
            node[e.id] = base.node_scalar_t[e.id].exponent
    return _assemble(coords, base, node)


def lift_action(support: SpinSupport, datum: AutomorphismDatum) -> MonomialAction:
    """Tau-level action of the principal lift with no inessential part."""
    return tau_action(support, make_spin_datum(support, datum))


def inessential_action(support: SpinSupport, bits: Mapping[VertexId, int]) -> MonomialAction:
    base = identity_datum(support.graph)
    return tau_action(support, make_spin_datum(support, base, inessential=bits))


def is_quasireflection(action: MonomialAction) -> bool:
    return sum(1 for x in eigen_exponents(action) if x == 0) == action.coords.dim - 1


def quasireflection_generators(support: SpinSupport) -> list[MonomialAction]:
    """-1 on each disconnecting exceptional node, xi_4 on each tail node."""
    coords = CoordinateSystem.for_support(support, Level.TAU)
    out = []
    for eid in support.graph.edge_ids:
        cls = support.edge_class[eid]
        if cls is EdgeClass.DISCONNECTING:
            out.append(MonomialAction.diagonal(coords, {coords.node_slot(eid): _HALF}))
        elif cls is EdgeClass.TAIL_NODE:
            out.append(MonomialAction.diagonal(coords, {coords.node_slot(eid): Fraction(1, 4)}))
    return out


_PRILL_POWER = {EdgeClass.TAIL_NODE: 4, EdgeClass.DISCONNECTING: 2}


def prill_quotient(action: MonomialAction, support: SpinSupport) -> MonomialAction:
    """Image in the u coordinates: u = tau^4 on tail nodes, tau^2 on other bridges."""
    if action.coords.level is not Level.TAU:
        raise WrongLevel(f"expected a Tau-level action, got {action.coords.level.value}")
    exps = list(action.exps)
    for i, slot in enumerate(action.coords.slots):
        if slot.kind == "node":
            exps[i] *= _PRILL_POWER.get(support.edge_class[slot.owner], 1)
    return MonomialAction(action.coords.at_level(Level.U), action.perm, tuple(exps))


def t_image(action: MonomialAction, support: SpinSupport) -> MonomialAction:
    """Image of a Tau-level action on the t coordinates (t = tau^2 on N)."""
    if action.coords.level is not Level.TAU:
        raise WrongLevel(f"expected a Tau-level action, got {action.coords.level.value}")
    exps = list(action.exps)
    for i, slot in enumerate(action.coords.slots):
        if slot.kind == "node" and slot.owner in support.exceptional:
            exps[i] *= 2
    return MonomialAction(action.coords.at_level(Level.T), action.perm, tuple(exps))

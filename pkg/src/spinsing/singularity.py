"""Reid-Shepherd-Barron-Tai sums and the smooth/canonical classification."""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

import numpy as np

from . import _kernels
from .automorphism import (
    AutomorphismDatum,
    ComponentType,
    automatic_lifts,
    is_eta2,
)
from .errors import (
    BadPrimitiveIndex,
    GenusTooSmall,
    IncompatibleDatum,
    MissingThetaFlag,
    NotFromSpinDatum,
    NotInTable,
    QuasireflectionPresent,
    TrivialElement,
)
from .graph import DualGraph, JClass, VertexId, components, contract_edges, genus, is_tree_like
from .monomial import (
    CoordinateSystem,
    GroupArrays,
    Level,
    MonomialAction,
    common_modulus,
    eigen_exponents,
    to_arrays,
)
from .spin import (
    EdgeClass,
    SpinStructureLabel,
    SpinSupport,
    make_support,
    sigma_graph,
    smooth_elliptic_tails,
)

__all__ = [
    "RstReport",
    "Verdict",
    "StratumClassification",
    "eigen_exponents",
    "rst_sum",
    "rst_min",
    "canonical_oracle",
    "smoothness_criterion",
    "classify_stratum",
    "singularity_reduce",
    "pi_sing_image_test",
    "component_weight",
    "block_contribution",
]


@dataclass(frozen=True)
class RstReport:
    order: int
    eigen_exponents: tuple[Fraction, ...]
    exponents_by_k: Mapping[int, tuple[int, ...]] = field(repr=False)
    sums: Mapping[int, Fraction] = field(repr=False)
    min_sum: Fraction
    witness_k: int
    quasireflection: bool
    element: MonomialAction | None = field(default=None, compare=False, repr=False)


def _a_values(exponents: Sequence[Fraction], n: int, k: int) -> tuple[int, ...]:
    if n < 1 or gcd(k, n) != 1:
        raise BadPrimitiveIndex(f"k={k} is not a primitive index modulo n={n}")
    kinv = pow(k % n, -1, n) if n > 1 else 0
    out = []
    for e in exponents:
        e = Fraction(e) % 1
        if n % e.denominator:
            raise BadPrimitiveIndex(f"exponent {e} has denominator not dividing n={n}")
        out.append(kinv * int(e * n) % n)
    return tuple(out)


def rst_sum(exponents: Iterable, n: int, k: int) -> Fraction:
    """(1/n) * sum a_j where zeta = exp(2 pi i k/n) and e_j = a_j k / n mod 1."""
    return Fraction(sum(_a_values([Fraction(x) for x in exponents], n, k)), n)


def rst_min(action: MonomialAction) -> RstReport:
    if action.is_identity:
        raise TrivialElement("the identity has no RST sum")
    exps = eigen_exponents(action)
    n = action.order
    by_k, sums = {}, {}
    for k in range(1, n):
        if gcd(k, n) == 1:
            by_k[k] = _a_values(exps, n, k)
            sums[k] = Fraction(sum(by_k[k]), n)
    best = min(sums.values())
    wit = min(k for k, s in sums.items() if s == best)
    qr = sum(1 for e in exps if e == 0) == len(exps) - 1
    return RstReport(n, exps, by_k, sums, best, wit, qr, action)


def _as_arrays(group) -> GroupArrays:
    if isinstance(group, GroupArrays):
        return group
    elems = list(group)
    L = common_modulus(elems)
    P, E = to_arrays(elems, L)
    return GroupArrays(elems[0].coords, P, E, L)


def canonical_oracle(group) -> tuple[bool, RstReport | None]:
    """RST criterion over a whole group (sequence of actions or ``GroupArrays``).

    Returns ``(True, None)`` when every nontrivial element has minimal sum at
    least 1, else ``(False, report)`` for the first offending element in the
    group's order.
    """
    arr = _as_arrays(group)
    orders, mins, _, ones = _kernels.rst_batch(arr.P, arr.E, arr.modulus)
    nontrivial = orders > 1
    d = arr.P.shape[1]
    if np.any(nontrivial & (ones == d - 1)):
        r = int(np.flatnonzero(nontrivial & (ones == d - 1))[0])
        raise QuasireflectionPresent(f"group contains the quasireflection {arr.element(r)!r}")
    bad = np.flatnonzero(nontrivial & (mins < orders))
    if bad.size == 0:
        return True, None
    return False, rst_min(arr.element(int(bad[0])))


def _check_genus(graph: DualGraph):
    if genus(graph) < 4:
        raise GenusTooSmall(f"classification needs genus >= 4, got {genus(graph)}")


def _eta2_flags(generators) -> list[tuple[AutomorphismDatum, bool]]:
    out = []
    for datum, flag in generators:
        structural = is_eta2(datum)
        if bool(flag) != structural:
            raise IncompatibleDatum(
                f"generator {datum.name or datum!r} declares is_eta2={bool(flag)} "
                f"but is structurally {'an' if structural else 'not an'} order-2 tail automorphism"
            )
        out.append((datum, structural))
    return out


def smoothness_criterion(
    support: SpinSupport, lifting_generators: Sequence[tuple[AutomorphismDatum, bool]]
) -> bool:
    """Sigma tree-like and the lifting group generated by order-2 tail automorphisms.

    Identity generators are ignored; ``is_eta2`` flags are checked against the
    datum's structure.
    """
    _check_genus(support.graph)
    gens = _eta2_flags(lifting_generators)
    if not is_tree_like(sigma_graph(support)):
        return False
    return all(flag for d, flag in gens if not d.is_identity)


class Verdict(str, enum.Enum):
    SMOOTH = "Smooth"
    CANONICAL = "CanonicalSingular"
    NON_CANONICAL = "NonCanonicalSingular"


@dataclass(frozen=True)
class StratumClassification:
    verdict: Verdict
    tree_like: bool
    offending_generator: str | None = None
    tail_witness: VertexId | None = None
    oracle_witness: RstReport | None = None

    @property
    def reasons(self) -> dict:
        out = {"tree_like": self.tree_like}
        if self.offending_generator is not None:
            out["offending_generator"] = self.offending_generator
        if self.tail_witness is not None:
            out["tail_witness"] = self.tail_witness
        if self.oracle_witness is not None:
            out["oracle_min_sum"] = self.oracle_witness.min_sum
        return out


def bad_tails(support: SpinSupport, labels: SpinStructureLabel) -> list[VertexId]:
    """Smooth j=0 elliptic tails with trivial theta characteristic."""
    out = []
    graph = support.graph
    for v in smooth_elliptic_tails(graph):
        if graph.vertex(v).decoration.j_class != JClass.J_ZERO:
            continue
        flag = labels.flag(v)
        if flag is None:
            raise MissingThetaFlag(v)
        if flag:
            out.append(v)
    return out


def classify_stratum(
    support: SpinSupport,
    labels: SpinStructureLabel,
    lifting_generators: Sequence[tuple[AutomorphismDatum, bool]] = (),
) -> StratumClassification:
    """Smooth / canonical singular / non-canonical singular verdict.

    The lifting generators are extended by the tail automorphisms whose lifts
    are forced (order 2 on every elliptic tail, order 3 on trivial-theta j=0
    tails).
    """
    _check_genus(support.graph)
    bad = bad_tails(support, labels)
    gens = _eta2_flags(lifting_generators)
    gens += [(d, is_eta2(d)) for d in automatic_lifts(support, labels)]
    tree = is_tree_like(sigma_graph(support))
    offending = next((d for d, flag in gens if not flag and not d.is_identity), None)
    if tree and offending is None:
        return StratumClassification(Verdict.SMOOTH, tree)
    name = None if offending is None else (offending.name or repr(offending))
    if bad:
        return StratumClassification(Verdict.NON_CANONICAL, tree, name, tail_witness=bad[0])
    return StratumClassification(Verdict.CANONICAL, tree, name)


def pi_sing_image_test(
    graph: DualGraph, aut_generators: Sequence[tuple[AutomorphismDatum, bool]]
) -> bool:
    """Whether the stable curve is a singular point of the moduli space of curves."""
    _check_genus(graph)
    gens = _eta2_flags(aut_generators)
    return not is_tree_like(graph) or any(not flag for d, flag in gens if not d.is_identity)


def singularity_reduce(
    support: SpinSupport, action: MonomialAction
) -> tuple[SpinSupport, MonomialAction]:
    """Smooth every cycle of non-disconnecting nodes whose scalar product is 1.

    The smoothed node slots become extra slots in the deformation block of the
    merged component, so the action's eigenvalues are carried over unchanged.
    """
    if action.coords.level is not Level.TAU:
        raise NotFromSpinDatum("expected a Tau-level action")
    if action.coords.key != CoordinateSystem.for_support(support, Level.TAU).key:
        raise NotFromSpinDatum("action does not live on the support's coordinates")
    while True:
        slots = action.coords.slots
        smooth = []
        for cyc, r in action.cycles():
            first = slots[cyc[0]]
            if first.kind == "node" and r == 0 and first.edge_class in (
                EdgeClass.NON_DISCONNECTING,
                EdgeClass.NON_EXCEPTIONAL,
            ):
                smooth += [slots[i].owner for i in cyc]
        if not smooth:
            return support, action
        support, action = _smooth_nodes(support, action, frozenset(smooth))


def _smooth_nodes(support: SpinSupport, action: MonomialAction, edges: frozenset):
    graph = support.graph
    new_graph = contract_edges(graph, edges)
    new_support = make_support(new_graph, support.exceptional - edges)
    new_coords = CoordinateSystem.for_support(new_support, Level.TAU)
    old_coords = action.coords

    rep = {v: grp[0] for grp in components(graph, edges) for v in grp}

    # old slot -> new slot: surviving nodes keep their node slot; member blocks
    # and smoothed nodes fill the merged block in slot order
    fill = {v: iter(new_coords.block(v)) for v in new_graph.vertex_ids}
    phi = {}
    for i, s in enumerate(old_coords.slots):
        if s.kind == "node" and s.owner not in edges:
            phi[i] = new_coords.node_slot(s.owner)
    for i, s in enumerate(old_coords.slots):
        if s.kind == "block":
            phi[i] = next(fill[rep[s.owner]])
        elif s.owner in edges:
            phi[i] = next(fill[rep[graph.edge(s.owner).ends[0]]])
    perm = [0] * new_coords.dim
    exps = [Fraction(0)] * new_coords.dim
    for i in range(old_coords.dim):
        perm[phi[i]] = phi[action.perm[i]]
        exps[phi[i]] = action.exps[i]
    try:
        new_action = MonomialAction(new_coords, tuple(perm), tuple(exps))
    except IncompatibleDatum as exc:
        raise NotFromSpinDatum(f"action does not respect the graph structure: {exc}") from exc
    return new_support, new_action


_WEIGHTS = {
    ("Elliptic", 2, 1): Fraction(0),
    ("Elliptic", 4, 1): Fraction(1, 2),
    ("Elliptic", 3, 1): Fraction(1, 3),
    ("Elliptic", 6, 1): Fraction(1, 3),
    ("Elliptic", 2, 2): Fraction(1, 2),
    ("Elliptic", 4, 2): Fraction(3, 4),
    ("Elliptic", 3, 2): Fraction(2, 3),
    ("HyperellipticG2", 2, 1): Fraction(1, 2),
}

WEIGHT_TABLE_ROWS: tuple[tuple[ComponentType, int], ...] = (
    (ComponentType("Identity"), 0),
) + tuple((ComponentType(k, n), m) for k, n, m in _WEIGHTS)


def component_weight(ctype: ComponentType | str, markings: int) -> Fraction:
    """Least contribution of a fixed component's block to the RST sum."""
    t = ctype if isinstance(ctype, ComponentType) else ComponentType.parse(ctype)
    if t.is_identity:
        return Fraction(0)
    try:
        return _WEIGHTS[(t.kind, t.order, markings)]
    except KeyError:
        raise NotInTable(f"no weight for {t} with {markings} marked points") from None


def block_contribution(exponents: Sequence[Fraction]) -> Fraction:
    """Smallest RST contribution of a diagonal block over primitive roots of its order."""
    exps = [Fraction(x) % 1 for x in exponents]
    n = reduce(lcm, (e.denominator for e in exps), 1)
    if n == 1:
        return Fraction(0)
    return min(rst_sum(exps, n, k) for k in range(1, n) if gcd(k, n) == 1)

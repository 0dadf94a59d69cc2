"""Reference supports with fully specified automorphism and theta data.

Every entry has genus at least 4 and a spin automorphism group small enough
for explicit closure.  Entries cover elliptic tails of each order, elliptic
ladders and hyperelliptic tails (which never reach RST sum below 1),
interchanged node pairs, and graphs whose Sigma is not tree-like.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

from .automorphism import AutomorphismDatum, Elliptic, eta_datum, make_datum
from .graph import DualGraph, graph_from_genera
from .spin import SpinStructureLabel, SpinSupport, make_labels, make_support


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    support: SpinSupport
    labels: SpinStructureLabel
    generators: tuple[tuple[AutomorphismDatum, bool], ...] = ()
    note: str = ""

    @property
    def graph(self) -> DualGraph:
        return self.support.graph


@dataclass
class _Builder:
    entries: list[CatalogEntry] = field(default_factory=list)

    def add(
        self,
        name: str,
        graph: DualGraph,
        exceptional,
        trivial: dict | None = None,
        gens: Sequence[tuple[Callable[[DualGraph], AutomorphismDatum], bool]] = (),
        note: str = "",
    ):
        s = make_support(graph, exceptional)
        lab = make_labels(s, trivial or {})
        data = tuple((mk(graph), flag) for mk, flag in gens)
        self.entries.append(CatalogEntry(name, s, lab, data, note))


def _tail(j: str, other: int = 3) -> DualGraph:
    return graph_from_genera([1, other], [(0, 1)], j_classes={0: j})


def _ladder(j: str) -> DualGraph:
    return graph_from_genera([2, 1, 2], [(0, 1), (1, 2)], j_classes={1: j})


def build_catalog() -> tuple[CatalogEntry, ...]:
    b = _Builder()

    # single elliptic tails of every order
    b.add("jzero_tail_trivial", _tail("JZero"), {0}, {0: True})
    b.add("jzero_tail_nontrivial", _tail("JZero"), {0}, {0: False})
    b.add("generic_tail", _tail("Generic"), {0})
    b.add(
        "j1728_tail_order4",
        _tail("J1728"),
        {0},
        gens=[(lambda g: eta_datum(g, 0, 4), True)],
    )
    b.add(
        "jzero_tail_order6_trivial",
        _tail("JZero"),
        {0},
        {0: True},
        gens=[(lambda g: eta_datum(g, 0, 6), False)],
        note="order-6 lift is forced by the trivial theta flag",
    )
    b.add(
        "jzero_tail_order3_declared_nontrivial",
        _tail("JZero"),
        {0},
        {0: False},
        gens=[(lambda g: eta_datum(g, 0, 3), True)],
        note="declared liftable but the nontrivial theta flag forbids the lift",
    )

    two_tails = graph_from_genera([2, 1, 1], [(0, 1), (0, 2)], j_classes={1: "JZero", 2: "JZero"})
    b.add("two_jzero_tails_one_trivial", two_tails, {0, 1}, {1: True, 2: False})
    b.add("two_jzero_tails_none_trivial", two_tails, {0, 1}, {1: False, 2: False})

    hyp_center = graph_from_genera([2, 1, 1], [(0, 1), (0, 2)], tags={0: ["HyperellipticG2"]})
    b.add(
        "tails_swapped_over_hyperelliptic",
        hyp_center,
        {0, 1},
        gens=[
            (
                lambda g: make_datum(
                    g, {1: 2, 2: 1}, {0: 1, 1: 0}, {0: "HyperellipticG2"}, name="swap"
                ),
                True,
            )
        ],
    )

    rational_center = graph_from_genera([0, 1, 1, 2], [(0, 1), (0, 2), (0, 3)])
    b.add(
        "tails_swapped_over_rational",
        rational_center,
        {0, 1, 2},
        gens=[
            (
                lambda g: make_datum(g, {1: 2, 2: 1}, {0: 1, 1: 0}, {0: "RationalOrder(2)"}, name="swap"),
                True,
            )
        ],
    )

    four_tails = graph_from_genera([0, 1, 1, 1, 1], [(0, 1), (0, 2), (0, 3), (0, 4)])
    b.add(
        "four_tails_rotated",
        four_tails,
        {0, 1, 2, 3},
        gens=[
            (
                lambda g: make_datum(
                    g,
                    {1: 2, 2: 3, 3: 4, 4: 1},
                    {0: 1, 1: 2, 2: 3, 3: 0},
                    {0: "RationalOrder(4)"},
                    name="rotate",
                ),
                True,
            )
        ],
    )
    four_tails_j0 = graph_from_genera(
        [0, 1, 1, 1, 1], [(0, 1), (0, 2), (0, 3), (0, 4)], j_classes={4: "JZero"}
    )
    b.add("four_tails_one_bad", four_tails_j0, {0, 1, 2, 3}, {4: True})

    three_tails = graph_from_genera([1, 1, 1, 1], [(0, 1), (0, 2), (0, 3)])
    b.add("three_tails_on_elliptic_center", three_tails, {0, 1, 2})

    # parallel edges
    pair = graph_from_genera([1, 2], [(0, 1), (0, 1)], tags={1: ["HyperellipticG2"]})

    def pair_swap(g):
        return make_datum(g, None, {0: 1, 1: 0}, {0: "Elliptic(2)", 1: "HyperellipticG2"}, name="swap")

    b.add("parallel_pair_all_exceptional", pair, {0, 1})
    b.add("parallel_pair_none_exceptional", pair, set())
    b.add("parallel_pair_swapped_exceptional", pair, {0, 1}, gens=[(pair_swap, True)])
    b.add(
        "parallel_pair_swapped_nonexceptional",
        pair,
        set(),
        gens=[(pair_swap, True)],
        note="swapped non-exceptional nodes with scalar product 1",
    )

    # dumbbell: two genus-1 components with a loop each, joined by a bridge
    dumbbell = graph_from_genera([1, 1], [(0, 0), (0, 1), (1, 1)])

    def dumbbell_swap(g):
        return make_datum(g, {0: 1, 1: 0}, {0: 2, 2: 0}, name="swap")

    b.add("dumbbell_all_exceptional", dumbbell, {0, 1, 2})
    b.add("dumbbell_one_loop_exceptional", dumbbell, {1, 2})
    b.add("dumbbell_bridge_only", dumbbell, {1})
    b.add("dumbbell_swapped", dumbbell, {0, 1, 2}, gens=[(dumbbell_swap, True)])
    b.add("dumbbell_swapped_loops_nonexceptional", dumbbell, {1}, gens=[(dumbbell_swap, True)])

    # triangle of elliptic components
    triangle = graph_from_genera([1, 1, 1], [(0, 1), (1, 2), (2, 0)])

    def rotate(g):
        return make_datum(g, {0: 1, 1: 2, 2: 0}, {0: 1, 1: 2, 2: 0}, name="rotate")

    b.add("triangle_all_exceptional", triangle, {0, 1, 2})
    b.add("triangle_none_exceptional", triangle, set())
    b.add("triangle_rotated_exceptional", triangle, {0, 1, 2}, gens=[(rotate, True)])
    b.add("triangle_rotated_nonexceptional", triangle, set(), gens=[(rotate, True)])

    # ladders and hyperelliptic tails
    for j, n in (("Generic", 2), ("JZero", 3), ("J1728", 4)):
        b.add(
            f"elliptic_ladder_order{n}",
            _ladder(j),
            {0, 1},
            gens=[(lambda g, n=n: make_datum(g, component_type={1: Elliptic(n)}, name=f"ladder{n}"), True)],
        )
    hyp_tail = graph_from_genera([2, 3], [(0, 1)], tags={0: ["HyperellipticG2"]})
    b.add(
        "hyperelliptic_tail",
        hyp_tail,
        {0},
        gens=[(lambda g: make_datum(g, component_type={0: "HyperellipticG2"}, name="hyperelliptic"), True)],
    )
    biell = graph_from_genera([2, 2], [(0, 1)], tags={0: ["BiellipticG2"]})
    b.add(
        "bielliptic_component",
        biell,
        {0},
        gens=[(lambda g: make_datum(g, component_type={0: "BiellipticG2"}, name="bielliptic"), True)],
    )

    # j=0 tail attached to a cycle; both supports
    tail_cycle = graph_from_genera([1, 1, 1], [(0, 1), (1, 2), (1, 2)], j_classes={0: "JZero"})
    b.add("jzero_tail_on_cycle_exceptional", tail_cycle, {0, 1, 2}, {0: True})
    b.add("jzero_tail_on_cycle_nonexceptional", tail_cycle, {0}, {0: True})
    b.add("jzero_tail_on_cycle_nontrivial", tail_cycle, {0, 1, 2}, {0: False})

    # singular elliptic tail (rational component with a loop)
    sing_tail = graph_from_genera([0, 3], [(0, 0), (0, 1)])
    b.add("singular_tail_loop_exceptional", sing_tail, {0, 1})
    b.add("singular_tail_loop_nonexceptional", sing_tail, {1})

    return tuple(b.entries)


CATALOG: tuple[CatalogEntry, ...] = build_catalog()


def entry(name: str) -> CatalogEntry:
    for e in CATALOG:
        if e.name == name:
            return e
    raise KeyError(name)

"""Brute-force cross-checks: spin automorphism groups as explicit closures.

The group of a spin curve is generated by the principal lifts of the lifting
generators together with the inessential automorphisms (one sign bit per
vertex of Sigma).  Smoothness is tested by comparing the group with the
subgroup its quasireflections generate; canonicity by running the RST
criterion on the image in the u coordinates.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .automorphism import (
    AutomorphismDatum,
    automatic_lifts,
    inessential_action,
    lift_action,
    resolve_liftable,
)
from .graph import JClass, VertexId
from .monomial import (
    DEFAULT_CAP,
    CoordinateSystem,
    GroupArrays,
    Level,
    MonomialAction,
    closure_arrays,
    subgroup_size,
)
from .singularity import RstReport, canonical_oracle
from .spin import EdgeClass, SpinStructureLabel, SpinSupport, smooth_elliptic_tails


def lifted_data(
    support: SpinSupport,
    labels: SpinStructureLabel | None,
    entries: Sequence[tuple[AutomorphismDatum, bool]],
) -> list[AutomorphismDatum]:
    """Data that lift to the spin curve: declared ones that pass the rules,
    plus the forced tail automorphisms."""
    out = [d for d, flag in entries if resolve_liftable(support, labels, d, flag)]
    return out + automatic_lifts(support, labels)


def spin_group(
    support: SpinSupport, data: Sequence[AutomorphismDatum], cap: int = DEFAULT_CAP
) -> GroupArrays:
    coords = CoordinateSystem.for_support(support, Level.TAU)
    gens = [lift_action(support, d) for d in data]
    gens += [inessential_action(support, {j: 1}) for j in sorted(
        set(support.sigma_vertex.values()), key=support.graph.vertex_pos
    )]
    return closure_arrays(gens, cap, coords)


def quasireflection_rows(group: GroupArrays) -> np.ndarray:
    orders, _, _, ones = _kernels.rst_batch(group.P, group.E, group.modulus)
    return np.flatnonzero((orders > 1) & (ones == group.P.shape[1] - 1))


def smooth_by_closure(group: GroupArrays, cap: int = DEFAULT_CAP) -> bool:
    """Whether the group is generated by the quasireflections it contains."""
    rows = quasireflection_rows(group)
    return subgroup_size(group, rows, cap) == group.size


def u_image(support: SpinSupport, group: GroupArrays) -> tuple[GroupArrays, np.ndarray]:
    """Image of a Tau-level group in the u coordinates and the row map to it."""
    mult = np.ones(group.P.shape[1], dtype=np.int64)
    power = {EdgeClass.TAIL_NODE: 4, EdgeClass.DISCONNECTING: 2}
    for i, s in enumerate(group.coords.slots):
        if s.kind == "node":
            mult[i] = power.get(s.edge_class, 1)
    E = (group.E * mult[None, :]) % group.modulus
    rows = np.concatenate([group.P, E], axis=1)
    uniq, inverse = np.unique(rows, axis=0, return_inverse=True)
    d = group.P.shape[1]
    coords = group.coords.at_level(Level.U)
    return GroupArrays(coords, uniq[:, :d].copy(), uniq[:, d:].copy(), group.modulus), inverse.ravel()


@dataclass(frozen=True)
class CanonicalCheck:
    canonical: bool
    witness: RstReport | None
    witness_preimages: tuple[MonomialAction, ...] = ()


def canonical_by_closure(support: SpinSupport, group: GroupArrays) -> CanonicalCheck:
    image, inverse = u_image(support, group)
    ok, report = canonical_oracle(image)
    if ok:
        return CanonicalCheck(True, None)
    target = report.element
    row = next(r for r in range(image.size) if image.element(r) == target)
    pre = tuple(group.element(int(r)) for r in np.flatnonzero(inverse == row))
    return CanonicalCheck(False, report, pre)


def violating_elements(support: SpinSupport, group: GroupArrays) -> list[tuple[int, list[int]]]:
    """U-image rows with RST sum below 1, each with its Tau-level preimage rows."""
    image, inverse = u_image(support, group)
    orders, mins, _, _ = _kernels.rst_batch(image.P, image.E, image.modulus)
    bad = np.flatnonzero((orders > 1) & (mins < orders))
    return [(int(r), [int(x) for x in np.flatnonzero(inverse == r)]) for r in bad]


def bad_element_tail(support: SpinSupport, action: MonomialAction) -> VertexId | None:
    """The tail vertex when the action's image on t has the bad shape.

    The shape: identity permutation, and nontrivial only on one smooth j=0
    elliptic tail (its block and its node), acting there with order 3 or 6.
    """
    coords = action.coords
    if any(p != i for i, p in enumerate(action.perm)):
        return None
    t_exps = [
        e * 2 if s.kind == "node" and s.owner in support.exceptional else e
        for s, e in zip(coords.slots, action.exps)
    ]
    t_exps = [e % 1 for e in t_exps]
    touched = {i for i, e in enumerate(t_exps) if e}
    graph = support.graph
    for v, eid in smooth_elliptic_tails(graph).items():
        if graph.vertex(v).decoration.j_class != JClass.J_ZERO:
            continue
        allowed = {coords.node_slot(eid), *coords.block(v)}
        if not touched or not touched <= allowed:
            continue
        node = t_exps[coords.node_slot(eid)]
        block = [t_exps[i] for i in coords.block(v)]
        if node.denominator in (3, 6) and all(Fraction(b).denominator == 3 for b in block):
            return v
    return None

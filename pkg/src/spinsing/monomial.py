"""Exact monomial actions on deformation coordinates.

An action sends basis vector ``x_i`` to ``zeta^(e_i) x_(p(i))`` where
``zeta^e`` stands for ``exp(2 pi i e)`` and ``e`` is a rational in [0, 1).
Everything here is exact; numpy integer arrays over a common modulus are
only used inside ``group_closure`` and the batched RST scan.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import lcm

import numpy as np

from . import _kernels
from .errors import CapExceeded, IncompatibleDatum
from .graph import DualGraph, EdgeId, VertexId, genus
from .spin import EdgeClass, SpinSupport

DEFAULT_CAP = 1_000_000


def as_fraction(x) -> Fraction:
    if isinstance(x, RootOfUnity):
        return x.exponent
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass(frozen=True, order=True)
class RootOfUnity:
    """The root of unity exp(2 pi i r), stored as r in [0, 1)."""

    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "exponent", Fraction(self.exponent) % 1)

    @classmethod
    def parse(cls, text: str) -> RootOfUnity:
        return cls(Fraction(text))

    @property
    def order(self) -> int:
        return self.exponent.denominator

    def __mul__(self, other: RootOfUnity) -> RootOfUnity:
        return RootOfUnity(self.exponent + other.exponent)

    def __pow__(self, k: int) -> RootOfUnity:
        return RootOfUnity(self.exponent * k)

    def inverse(self) -> RootOfUnity:
        return RootOfUnity(-self.exponent)

    def __str__(self) -> str:
        return fraction_str(self.exponent)


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class Level(str, enum.Enum):
    T = "T"
    TAU = "Tau"
    U = "U"


@dataclass(frozen=True)
class Slot:
    kind: str  # "node" or "block"
    owner: object  # edge id for nodes, vertex id for blocks
    index: int = 0
    edge_class: EdgeClass | None = None


def block_dimension(graph: DualGraph, vid: VertexId) -> int:
    return 3 * graph.vertex(vid).genus - 3 + graph.degree(vid)


@dataclass(frozen=True, eq=False)
class CoordinateSystem:
    """Node slots in edge order, then one block per vertex in vertex order."""

    graph: DualGraph
    level: Level
    slots: tuple[Slot, ...]

    def __post_init__(self):
        assert len(self.slots) == 3 * genus(self.graph) - 3, "dimension identity failed"

    @classmethod
    def build(
        cls,
        graph: DualGraph,
        level: Level = Level.T,
        edge_class: Mapping[EdgeId, EdgeClass] | None = None,
    ) -> CoordinateSystem:
        edge_class = edge_class or {}
        slots = [Slot("node", eid, 0, edge_class.get(eid)) for eid in graph.edge_ids]
        for vid in graph.vertex_ids:
            slots += [Slot("block", vid, k) for k in range(block_dimension(graph, vid))]
        return cls(graph, Level(level), tuple(slots))

    @classmethod
    def for_support(cls, support: SpinSupport, level: Level = Level.TAU) -> CoordinateSystem:
        return cls.build(support.graph, level, support.edge_class)

    @property
    def dim(self) -> int:
        return len(self.slots)

    @cached_property
    def _slot_index(self) -> dict:
        return {(s.kind, s.owner, s.index): i for i, s in enumerate(self.slots)}

    def node_slot(self, eid: EdgeId) -> int:
        return self._slot_index[("node", eid, 0)]

    def block(self, vid: VertexId) -> range:
        dim = block_dimension(self.graph, vid)
        if dim == 0:
            return range(0)
        start = self._slot_index[("block", vid, 0)]
        return range(start, start + dim)

    def at_level(self, level: Level) -> CoordinateSystem:
        return CoordinateSystem(self.graph, Level(level), self.slots)

    @property
    def key(self):
        return (self.level, self.slots)

    def __eq__(self, other):
        if not isinstance(other, CoordinateSystem):
            return NotImplemented
        return self.key == other.key and self.graph == other.graph

    def __hash__(self):
        return hash(self.key)


@dataclass(frozen=True, eq=False)
class MonomialAction:
    coords: CoordinateSystem
    perm: tuple[int, ...]
    exps: tuple[Fraction, ...]

    def __post_init__(self):
        d = self.coords.dim
        perm = tuple(int(p) for p in self.perm)
        exps = tuple(Fraction(e) % 1 for e in self.exps)
        if len(perm) != d or len(exps) != d or sorted(perm) != list(range(d)):
            raise IncompatibleDatum("slot map is not a permutation of the coordinate slots")
        block_image: dict = {}
        for i, j in enumerate(perm):
            a, b = self.coords.slots[i], self.coords.slots[j]
            if a.kind != b.kind or a.edge_class != b.edge_class:
                raise IncompatibleDatum(f"slot {a} cannot map to slot {b}")
            if a.kind == "block" and block_image.setdefault(a.owner, b.owner) != b.owner:
                raise IncompatibleDatum(f"block of {a.owner!r} is split across blocks")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "exps", exps)

    @classmethod
    def identity(cls, coords: CoordinateSystem) -> MonomialAction:
        return cls(coords, tuple(range(coords.dim)), (Fraction(0),) * coords.dim)

    @classmethod
    def diagonal(cls, coords: CoordinateSystem, exps: Mapping[int, object]) -> MonomialAction:
        e = [Fraction(0)] * coords.dim
        for i, x in exps.items():
            e[i] = as_fraction(x)
        return cls(coords, tuple(range(coords.dim)), tuple(e))

    @property
    def key(self):
        return (self.perm, self.exps)

    def __eq__(self, other):
        if not isinstance(other, MonomialAction):
            return NotImplemented
        return self.key == other.key and self.coords.key == other.coords.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        moved = {i: p for i, p in enumerate(self.perm) if p != i}
        scal = {i: fraction_str(e) for i, e in enumerate(self.exps) if e}
        return f"MonomialAction(level={self.coords.level.value}, moved={moved}, exps={scal})"

    def __mul__(self, other: MonomialAction) -> MonomialAction:
        """Composition: ``(a * b)(x) = a(b(x))``."""
        if self.coords.key != other.coords.key:
            raise IncompatibleDatum("actions live on different coordinate systems")
        perm = tuple(self.perm[other.perm[i]] for i in range(self.coords.dim))
        exps = tuple(other.exps[i] + self.exps[other.perm[i]] for i in range(self.coords.dim))
        return MonomialAction(self.coords, perm, exps)

    def inverse(self) -> MonomialAction:
        d = self.coords.dim
        perm = [0] * d
        exps = [Fraction(0)] * d
        for i, j in enumerate(self.perm):
            perm[j] = i
            exps[j] = -self.exps[i]
        return MonomialAction(self.coords, tuple(perm), tuple(exps))

    def __pow__(self, k: int) -> MonomialAction:
        base = self if k >= 0 else self.inverse()
        out = MonomialAction.identity(self.coords)
        for _ in range(abs(k)):
            out = base * out
        return out

    @property
    def is_identity(self) -> bool:
        return all(p == i for i, p in enumerate(self.perm)) and not any(self.exps)

    def cycles(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Permutation cycles with their total scalar exponent mod 1."""
        seen = set()
        out = []
        for start in range(self.coords.dim):
            if start in seen:
                continue
            cyc = []
            i = start
            while i not in seen:
                seen.add(i)
                cyc.append(i)
                i = self.perm[i]
            out.append((tuple(cyc), sum((self.exps[j] for j in cyc), Fraction(0)) % 1))
        return out

    @property
    def order(self) -> int:
        return reduce(lcm, (len(c) * r.denominator for c, r in self.cycles()), 1)

    def at_level(self, level: Level) -> MonomialAction:
        return MonomialAction(self.coords.at_level(level), self.perm, self.exps)


def eigen_exponents(action: MonomialAction) -> tuple[Fraction, ...]:
    """Eigenvalue exponents as a sorted multiset of size dim.

    An m-cycle with total exponent R has characteristic polynomial
    x^m - zeta^R, whose roots have exponents (R + j)/m.
    """
    out = []
    for cyc, r in action.cycles():
        m = len(cyc)
        out += [((r + j) / m) % 1 for j in range(m)]
    return tuple(sorted(out))


def common_modulus(actions: Iterable[MonomialAction]) -> int:
    return reduce(lcm, (e.denominator for a in actions for e in a.exps), 1)


def to_arrays(actions: Sequence[MonomialAction], modulus: int) -> tuple[np.ndarray, np.ndarray]:
    P = np.array([a.perm for a in actions], dtype=np.int64).reshape(len(actions), -1)
    E = np.array(
        [[int(e * modulus) for e in a.exps] for a in actions], dtype=np.int64
    ).reshape(len(actions), -1)
    return P, E


def from_row(coords: CoordinateSystem, p, e, modulus: int) -> MonomialAction:
    return MonomialAction(
        coords, tuple(int(x) for x in p), tuple(Fraction(int(x), modulus) for x in e)
    )


@dataclass(frozen=True, eq=False)
class GroupArrays:
    """A finite group of monomial actions stored as integer arrays."""

    coords: CoordinateSystem
    P: np.ndarray
    E: np.ndarray
    modulus: int

    @property
    def size(self) -> int:
        return self.P.shape[0]

    def element(self, r: int) -> MonomialAction:
        return from_row(self.coords, self.P[r], self.E[r], self.modulus)

    def elements(self) -> tuple[MonomialAction, ...]:
        return tuple(self.element(r) for r in range(self.size))


def closure_arrays(
    generators: Sequence[MonomialAction],
    cap: int = DEFAULT_CAP,
    coords: CoordinateSystem | None = None,
) -> GroupArrays:
    """Breadth-first closure; rows sorted lexicographically (identity first)."""
    generators = list(generators)
    if coords is None:
        if not generators:
            raise ValueError("need a coordinate system when there are no generators")
        coords = generators[0].coords
    for g in generators:
        if g.coords.key != coords.key:
            raise IncompatibleDatum("generators live on different coordinate systems")
    L = common_modulus(generators)
    d = coords.dim
    ident = MonomialAction.identity(coords)
    P0, E0 = to_arrays([ident], L)
    gens = [to_arrays([g], L) for g in generators if not g.is_identity]

    seen = {np.concatenate([P0[0], E0[0]]).tobytes()}
    blocks_P, blocks_E = [P0], [E0]
    fP, fE = P0, E0
    while fP.shape[0] and gens:
        cand_P, cand_E = [], []
        for gp, ge in gens:
            P2, E2 = _kernels.compose_batch(fP, fE, gp[0], ge[0], L)
            cand_P.append(P2)
            cand_E.append(E2)
        rows = np.unique(np.concatenate([np.vstack(cand_P), np.vstack(cand_E)], axis=1), axis=0)
        fresh = []
        for r in range(rows.shape[0]):
            key = rows[r].tobytes()
            if key not in seen:
                seen.add(key)
                fresh.append(r)
        if len(seen) > cap:
            raise CapExceeded(cap)
        new = rows[fresh]
        fP, fE = new[:, :d].copy(), new[:, d:].copy()
        blocks_P.append(fP)
        blocks_E.append(fE)
    allrows = np.concatenate([np.vstack(blocks_P), np.vstack(blocks_E)], axis=1)
    order = np.lexsort(allrows.T[::-1])
    allrows = allrows[order]
    return GroupArrays(coords, allrows[:, :d].copy(), allrows[:, d:].copy(), L)


def group_closure(
    generators: Sequence[MonomialAction],
    cap: int = DEFAULT_CAP,
    coords: CoordinateSystem | None = None,
) -> tuple[MonomialAction, ...]:
    """The finite group generated by ``generators``; raises ``CapExceeded``."""
    return closure_arrays(generators, cap, coords).elements()


def subgroup_size(group: GroupArrays, rows: np.ndarray, cap: int = DEFAULT_CAP) -> int:
    """Size of the subgroup generated by the selected rows of ``group``."""
    gens = [group.element(int(r)) for r in rows]
    return closure_arrays(gens, cap, group.coords).size

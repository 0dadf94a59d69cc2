"""Deterministic random corpus of small stable dual graphs."""

from __future__ import annotations

import random

from .graph import DualGraph, validate_graph


def random_stable_graph(rng: random.Random, max_edges: int = 12, max_vertices: int = 6) -> DualGraph:
    """A connected stable multigraph with loops, at most ``max_edges`` edges."""
    while True:
        n = rng.randint(1, max_vertices)
        if n - 1 > max_edges:
            continue
        ends = []
        for v in range(1, n):
            ends.append((rng.randrange(v), v))
        extra = rng.randint(0, max_edges - len(ends))
        for _ in range(extra):
            a = rng.randrange(n)
            b = a if rng.random() < 0.25 else rng.randrange(n)
            ends.append((a, b))
        rng.shuffle(ends)
        deg = [0] * n
        for a, b in ends:
            deg[a] += 1
            deg[b] += 1
        genera = []
        for v in range(n):
            g = rng.choice([0, 0, 0, 1, 1, 2, 3])
            if g == 0 and deg[v] < 3:
                g = 1 if deg[v] >= 1 else 2
            genera.append(g)
        total = sum(genera) + len(ends) - n + 1
        if total < 2:
            genera[0] += 2 - total
            if genera[0] == 1 and deg[0] == 0:
                genera[0] = 2
        j = {v: rng.choice(["Generic", "JZero", "J1728"]) for v in range(n) if genera[v] == 1}
        try:
            return validate_graph(
                [(v, genera[v], j.get(v)) for v in range(n)],
                [(k, a, b) for k, (a, b) in enumerate(ends)],
            )
        except ValueError:
            continue


def corpus(size: int = 240, seed: int = 20240601, max_edges: int = 12) -> list[DualGraph]:
    rng = random.Random(seed)
    return [random_stable_graph(rng, max_edges) for _ in range(size)]

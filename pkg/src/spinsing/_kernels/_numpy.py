"""Pure-numpy reference implementations of the hot loops."""

from __future__ import annotations

from math import gcd

import numpy as np


def even_masks(n_vertices: int, eu: np.ndarray, ev: np.ndarray) -> np.ndarray:
    """Brute force: every edge bitmask whose non-loop edges give even degrees."""
    n_edges = len(eu)
    masks = np.arange(1 << n_edges, dtype=np.int64)
    incident = np.zeros(n_vertices, dtype=np.int64)
    for i in range(n_edges):
        if eu[i] != ev[i]:
            incident[eu[i]] |= 1 << i
            incident[ev[i]] |= 1 << i
    ok = np.ones(len(masks), dtype=bool)
    for v in range(n_vertices):
        ok &= (np.bitwise_count(masks & incident[v]) & 1) == 0
    return masks[ok]


def compose_batch(P, E, gp, ge, modulus):
    """Left-multiply each row action by one generator: g after x."""
    return gp[P], (E + ge[P]) % modulus


def _cycle_data(p, e, modulus):
    d = len(p)
    seen = np.zeros(d, dtype=bool)
    cycles = []
    for start in range(d):
        if seen[start]:
            continue
        m = 0
        s = 0
        i = start
        while not seen[i]:
            seen[i] = True
            s += int(e[i])
            i = int(p[i])
            m += 1
        cycles.append((m, s % modulus))
    return cycles


def rst_batch(P, E, modulus):
    """Per row: order n, min numerator over primitive k, witness k, #eigenvalue 1.

    The RST minimum of a row is ``min_num / n``.
    """
    k_rows = P.shape[0]
    orders = np.ones(k_rows, dtype=np.int64)
    mins = np.zeros(k_rows, dtype=np.int64)
    wits = np.ones(k_rows, dtype=np.int64)
    ones = np.zeros(k_rows, dtype=np.int64)
    for r in range(k_rows):
        cycles = _cycle_data(P[r], E[r], modulus)
        n = 1
        for m, s in cycles:
            c = m * (modulus // gcd(s, modulus))
            n = n * c // gcd(n, c)
        a0 = []
        for m, s in cycles:
            g = gcd(s, modulus)
            scale = n // (m * modulus // g)
            a0.extend((scale * ((s + j * modulus) // g)) % n for j in range(m))
        a0 = np.array(a0, dtype=np.int64)
        orders[r] = n
        ones[r] = int(np.count_nonzero(a0 == 0))
        if n == 1:
            continue
        ks = np.array([k for k in range(1, n) if gcd(k, n) == 1], dtype=np.int64)
        kinv = np.array([pow(int(k), -1, n) for k in ks], dtype=np.int64)
        sums = ((kinv[:, None] * a0[None, :]) % n).sum(axis=1)
        best = int(np.argmin(sums))
        mins[r] = sums[best]
        wits[r] = ks[best]
    return orders, mins, wits, ones

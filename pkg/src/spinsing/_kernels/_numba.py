"""numba-compiled versions of the hot loops, same signatures as ``_numpy``."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _popparity(x):
    p = 0
    while x:
        x &= x - 1
        p ^= 1
    return p


@njit(cache=True)
def _even_masks(n_vertices, eu, ev):
    n_edges = eu.shape[0]
    incident = np.zeros(n_vertices, dtype=np.int64)
    for i in range(n_edges):
        if eu[i] != ev[i]:
            incident[eu[i]] |= np.int64(1) << i
            incident[ev[i]] |= np.int64(1) << i
    total = np.int64(1) << n_edges
    out = np.empty(total, dtype=np.int64)
    count = 0
    for m in range(total):
        ok = True
        for v in range(n_vertices):
            if _popparity(m & incident[v]):
                ok = False
                break
        if ok:
            out[count] = m
            count += 1
    return out[:count]


def even_masks(n_vertices, eu, ev):
    return _even_masks(
        int(n_vertices), np.asarray(eu, dtype=np.int64), np.asarray(ev, dtype=np.int64)
    )


@njit(cache=True)
def _compose_batch(P, E, gp, ge, modulus):
    k, d = P.shape
    P2 = np.empty_like(P)
    E2 = np.empty_like(E)
    for r in range(k):
        for i in range(d):
            j = P[r, i]
            P2[r, i] = gp[j]
            E2[r, i] = (E[r, i] + ge[j]) % modulus
    return P2, E2


def compose_batch(P, E, gp, ge, modulus):
    return _compose_batch(P, E, gp, ge, np.int64(modulus))


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _modinv(a, n):
    t, newt = 0, 1
    r, newr = n, a % n
    while newr:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    return t % n


@njit(cache=True)
def _rst_batch(P, E, modulus):
    k_rows, d = P.shape
    orders = np.ones(k_rows, dtype=np.int64)
    mins = np.zeros(k_rows, dtype=np.int64)
    wits = np.ones(k_rows, dtype=np.int64)
    ones = np.zeros(k_rows, dtype=np.int64)
    seen = np.zeros(d, dtype=np.bool_)
    cyc_m = np.empty(d, dtype=np.int64)
    cyc_s = np.empty(d, dtype=np.int64)
    a0 = np.empty(d, dtype=np.int64)
    for r in range(k_rows):
        seen[:] = False
        nc = 0
        for start in range(d):
            if seen[start]:
                continue
            m = 0
            s = 0
            i = start
            while not seen[i]:
                seen[i] = True
                s += E[r, i]
                i = P[r, i]
                m += 1
            cyc_m[nc] = m
            cyc_s[nc] = s % modulus
            nc += 1
        n = 1
        for c in range(nc):
            o = cyc_m[c] * (modulus // _gcd(cyc_s[c], modulus))
            n = n * o // _gcd(n, o)
        pos = 0
        for c in range(nc):
            m = cyc_m[c]
            s = cyc_s[c]
            g = _gcd(s, modulus)
            scale = n // (m * modulus // g)
            for j in range(m):
                a0[pos] = (scale * ((s + j * modulus) // g)) % n
                pos += 1
        orders[r] = n
        z = 0
        for i in range(d):
            if a0[i] == 0:
                z += 1
        ones[r] = z
        if n == 1:
            continue
        best = -1
        best_k = 1
        for k in range(1, n):
            if _gcd(k, n) != 1:
                continue
            kinv = _modinv(k, n)
            tot = 0
            for i in range(d):
                tot += (kinv * a0[i]) % n
            if best < 0 or tot < best:
                best = tot
                best_k = k
        mins[r] = best
        wits[r] = best_k
    return orders, mins, wits, ones


def rst_batch(P, E, modulus):
    return _rst_batch(P, E, np.int64(modulus))

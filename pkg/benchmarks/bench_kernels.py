"""Compare the numpy and numba kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--rows N] [--dim D] [--repeat R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from spinsing import _kernels
from spinsing._kernels import numpy_backend


def _random_group_rows(rng, rows, dim, modulus):
    P = np.array([rng.permutation(dim) for _ in range(rows)], dtype=np.int64)
    E = rng.integers(0, modulus, size=(rows, dim), dtype=np.int64)
    return P, E


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=20000)
    ap.add_argument("--dim", type=int, default=15)
    ap.add_argument("--modulus", type=int, default=24)
    ap.add_argument("--edges", type=int, default=16)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = {"numpy": numpy_backend}
    if _kernels.numba_backend is not None:
        backends["numba"] = _kernels.numba_backend
    else:
        print("numba backend unavailable; timing numpy only")

    rng = np.random.default_rng(0)
    P, E = _random_group_rows(rng, args.rows, args.dim, args.modulus)
    gp, ge = _random_group_rows(rng, 1, args.dim, args.modulus)
    n_vert = max(2, args.edges // 2)
    eu = rng.integers(0, n_vert, size=args.edges).astype(np.int64)
    ev = rng.integers(0, n_vert, size=args.edges).astype(np.int64)

    workloads = {
        "compose_batch": lambda b: b.compose_batch(P, E, gp[0], ge[0], args.modulus),
        "rst_batch": lambda b: b.rst_batch(P, E, args.modulus),
        "even_masks": lambda b: b.even_masks(n_vert, eu, ev),
    }
    print(f"rows={args.rows} dim={args.dim} modulus={args.modulus} edges={args.edges}")
    print(f"{'kernel':<16}" + "".join(f"{name:>12}" for name in backends) + f"{'speedup':>10}")
    for label, work in workloads.items():
        for b in backends.values():
            work(b)  # warm-up compiles the jitted kernels
        t = {name: _best(lambda: work(b), args.repeat) for name, b in backends.items()}
        speed = f"{t['numpy'] / t['numba']:>9.1f}x" if "numba" in t else ""
        print(f"{label:<16}" + "".join(f"{v * 1e3:>10.2f}ms" for v in t.values()) + speed)


if __name__ == "__main__":
    main()

"""Hot loops with a numba backend and a pure-numpy fallback.

The numba backend is used when numba imports cleanly, unless the environment
variable ``SPINSING_DISABLE_NUMBA`` is set to a non-empty value other than
``0``.  Both backends are importable directly for benchmarking.
"""

from __future__ import annotations

import os

from . import _numpy as numpy_backend

numba_backend = None
if os.environ.get("SPINSING_DISABLE_NUMBA", "0") in ("", "0"):
    try:
        from . import _numba as numba_backend
    except ImportError:  # numba missing or broken for this interpreter
        numba_backend = None

active = numba_backend if numba_backend is not None else numpy_backend
BACKEND = "numba" if active is numba_backend else "numpy"

even_masks = active.even_masks
compose_batch = active.compose_batch
rst_batch = active.rst_batch

__all__ = ["BACKEND", "even_masks", "compose_batch", "rst_batch", "numpy_backend", "numba_backend"]

"""Backend facade for the hot kernels.

SYMBREAK_BACKEND=numba (default) or numpy selects the lane at import
time.  Both lanes expose the same functions and produce bit-identical
results; the numpy lane exists as a dependency-light reference and for
debugging miscompiles.  `benchmarks/bench_backends.py` compares them.
"""

from __future__ import annotations

import os

_requested = os.environ.get("SYMBREAK_BACKEND", "numba").strip().lower()

if _requested not in ("numba", "numpy"):
    raise RuntimeError(f"SYMBREAK_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numba":
    try:
        from . import _kernels_numba as _impl
    except ImportError:
        from . import _kernels_numpy as _impl

        BACKEND = "numpy"
    else:
        BACKEND = "numba"
else:
    from . import _kernels_numpy as _impl

    BACKEND = "numpy"

gnp_pairs = _impl.gnp_pairs
heard_flags = _impl.heard_flags
bfs_distances = _impl.bfs_distances
greedy_mis_masked = _impl.greedy_mis_masked
insertion_pass = _impl.insertion_pass
sketch_apply = _impl.sketch_apply
sketch_peel = _impl.sketch_peel

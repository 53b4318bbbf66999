"""Counter-based deterministic randomness.

Every random decision in the package is a pure function of
(seed, context tag, per-decision keys), computed with the splitmix64
finalizer.  No stateful generators: partitions, routing coins and node
coin flips are order-independent and reproducible across platforms.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

_PHI = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

# Context tags keep independent decision streams from colliding.
CTX_GNP = 1
CTX_GADGET = 2
CTX_PARTITION = 3
CTX_ROUTE_MARK = 4
CTX_ROUTE_PERM = 5
CTX_BEEP = 6
CTX_SIM_ROUTE = 7
CTX_ALG2_MARK = 8
CTX_ALG2_MIS = 9
CTX_ALG4 = 10
CTX_ALG4_MARK = 11
CTX_ALG4_SAMPLE = 12
CTX_LEVELS = 13
CTX_SKETCH = 14
CTX_L0 = 15
CTX_STREAM_ORDER = 16
CTX_PHASE2 = 17


def mix64(x: int) -> int:
    """splitmix64 finalizer on a 64-bit integer."""
    x = (x + _PHI) & MASK64
    x = ((x ^ (x >> 30)) * _M1) & MASK64
    x = ((x ^ (x >> 27)) * _M2) & MASK64
    return x ^ (x >> 31)


def fold(seed: int, *keys: int) -> int:
    """Derive a substream state from a seed and integer keys."""
    h = mix64(seed & MASK64)
    for k in keys:
        h = mix64(h ^ ((k * _M1) & MASK64))
    return h


def u01(state: int) -> float:
    """Map a 64-bit state to a float in [0, 1)."""
    return (state >> 11) * 2.0**-53


def mix64_array(keys: np.ndarray) -> np.ndarray:
    """Vectorized splitmix64 finalizer (uint64 in, uint64 out)."""
    x = keys.astype(np.uint64, copy=True)
    x += np.uint64(_PHI)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_M1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_M2)
    return x ^ (x >> np.uint64(31))


def fold_array(state: int, keys: np.ndarray) -> np.ndarray:
    """Vectorized fold of one key array onto a scalar substream state."""
    x = keys.astype(np.uint64, copy=False) * np.uint64(_M1)
    return mix64_array(np.uint64(state) ^ x)


def u01_array(state: int, keys: np.ndarray) -> np.ndarray:
    """One uniform [0,1) draw per key, keyed off `state`."""
    h = fold_array(state, keys)
    return (h >> np.uint64(11)).astype(np.float64) * 2.0**-53

"""L0 sampling and exact sparse recovery over dynamic integer multisets.

L0Sampler returns a near-uniform element of the final support of a
+/-1 update stream.  Per repetition row, items hash to geometric levels
(level j keeps a 2^-j fraction); each level keeps an exact (count,
id_sum, fingerprint) triple, so a level that ends 1-sparse yields its
item, verified by a polynomial fingerprint over GF(2^61 - 1).  The
failure probability drives the number of independent rows.

SparseRecoverySketch recovers *all* items of an up-to-s-sparse multiset
(the per-vertex edge-recovery task in dynamic graph streams): items
hash into a few rows of 1-sparse cells and are peeled out iteratively.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from ._rng import CTX_L0, CTX_SKETCH, fold, fold_array

_PRIME = (1 << 61) - 1


class _Sentinel:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


FAIL = _Sentinel("FAIL")
EMPTY = _Sentinel("EMPTY")


class L0Sampler:
    """Uniform sampler from the support of a dynamic multiset on [0, U)."""

    def __init__(self, universe: int, seed: int, delta: float = 0.1):
        if universe < 1:
            raise ValueError("universe must be >= 1")
        if not 0.0 < delta <= 1.0:
            raise ValueError("delta must be in (0, 1]")
        self.universe = universe
        self.delta = delta
        self.levels = math.ceil(math.log2(universe)) + 1
        self.rows = max(1, math.ceil(2.0 * math.log2(1.0 / delta)))
        self._level_seed = [fold(seed, CTX_L0, r, 1) for r in range(self.rows)]
        self._fp_base = [2 + fold(seed, CTX_L0, r, 2) % (_PRIME - 3) for r in range(self.rows)]
        self.count = np.zeros((self.rows, self.levels), np.int64)
        self.id_sum = np.zeros((self.rows, self.levels), np.int64)
        self.fingerprint = np.zeros((self.rows, self.levels), np.int64)

    def _level_of(self, row: int, item: int) -> int:
        h = fold(self._level_seed[row], item) & ((1 << self.levels) - 1)
        if h == 0:
            return self.levels - 1
        return min((h & -h).bit_length() - 1, self.levels - 1)

    def update(self, item: int, delta: int) -> None:
        """Apply a +1/-1 update for `item` to every row."""
        if not 0 <= item < self.universe:
            raise ValueError(f"item {item} outside universe [0, {self.universe})")
        if delta not in (1, -1):
            raise ValueError("delta must be +1 or -1")
        for r in range(self.rows):
            j = self._level_of(r, item)
            f = pow(self._fp_base[r], item, _PRIME)
            for lvl in range(j + 1):
                self.count[r, lvl] += delta
                self.id_sum[r, lvl] += delta * item
                self.fingerprint[r, lvl] = (self.fingerprint[r, lvl] + delta * f) % _PRIME

    def query(self):
        """An item of the final support, or EMPTY, or FAIL.

        Scans each row's levels from sparsest down and returns the first
        1-sparse, fingerprint-verified id.  FAIL tells the caller to
        fall back to another sampler in its bank; it is a value, not an
        exception.
        """
        if (
            not self.count.any()
            and not self.id_sum.any()
            and not self.fingerprint.any()
        ):
            return EMPTY
        for r in range(self.rows):
            for lvl in range(self.levels - 1, -1, -1):
                if self.count[r, lvl] != 1:
                    continue
                x = int(self.id_sum[r, lvl])
                if not 0 <= x < self.universe:
                    continue
                if self._level_of(r, x) < lvl:
                    continue
                if self.fingerprint[r, lvl] != pow(self._fp_base[r], x, _PRIME):
                    continue
                return x
        return FAIL

    def state_triples(self) -> np.ndarray:
        """Flat (count, id_sum, fingerprint) triples, for golden files."""
        return np.stack([self.count, self.id_sum, self.fingerprint], axis=-1).reshape(-1, 3)


class SparseRecoverySketch:
    """Per-slot exact recovery of up-to-`capacity`-sparse item sets.

    One slot per vertex; each slot owns `rows` hash rows of
    (capacity + 4) cells holding exact (count, id_sum, fingerprint)
    tallies, i.e. the same 1-sparse detector the L0 sampler uses per
    level, arranged for full recovery instead of single sampling.
    Updates are linear, so they can be applied in any order.
    """

    def __init__(self, nslots: int, capacity: int, universe: int, seed: int,
                 slot_keys: np.ndarray | None = None, rows: int = 4):
        if capacity < 1:
            capacity = 1
        self.nslots = nslots
        self.capacity = capacity
        self.universe = universe
        self.rows = rows
        self.buckets = capacity + 4
        if slot_keys is None:
            slot_keys = np.arange(nslots, dtype=np.int64)
        self.vseeds = fold_array(fold(seed, CTX_SKETCH, 1), slot_keys)
        self.fseeds = fold_array(fold(seed, CTX_SKETCH, 2), slot_keys)
        cells = nslots * rows * self.buckets
        self.cnt = np.zeros(cells, np.int64)
        self.idsum = np.zeros(cells, np.int64)
        self.fp = np.zeros(cells, np.uint64)

    @property
    def cell_count(self) -> int:
        return self.cnt.size

    def apply(self, slots: np.ndarray, items: np.ndarray, deltas: np.ndarray) -> None:
        kernels.sketch_apply(
            self.cnt, self.idsum, self.fp,
            slots.astype(np.int64), items.astype(np.int64), deltas.astype(np.int64),
            self.vseeds, self.fseeds, self.rows, self.buckets,
        )

    def recover(self, caps: np.ndarray):
        """Peel every slot; caps[s] is the exact item count expected.

        Returns (items, offsets, got, leftover): slot s recovered
        items[offsets[s] : offsets[s] + got[s]]; leftover[s] is True
        when the slot's cells did not fully drain (recovery incomplete).
        """
        return kernels.sketch_peel(
            self.cnt, self.idsum, self.fp,
            self.vseeds, self.fseeds, self.rows, self.buckets,
            self.universe, caps.astype(np.int64),
        )

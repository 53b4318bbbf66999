"""One-pass beta-ruling sets over edge streams.

Levels are sampled before the stream: every vertex starts at level 1
and promotes from level i-1 to i with probability n^(-q_{i-1}) where
q_i = 1/2^(beta-i).  During the pass a vertex u stores the first
mu_{level(u)} arriving edges whose other endpoint has level >= level(u),
while level-beta vertices store every incident edge; filling the budget
marks u covered, and an edge between two covered endpoints is discarded
unread.  Post-processing lifts uncovered vertices to the top level and
takes a greedy MIS of the stored subgraph among top-level vertices.

The insertion-deletion variant keeps, per vertex, an exact sparse
recovery sketch over the same level-filtered dynamic edge set plus an
exact counter of that set's size, and reconstructs the stored structure
after the pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from ._rng import CTX_LEVELS, CTX_SKETCH, CTX_STREAM_ORDER, fold, fold_array, u01_array
from .graph import Graph, from_edges
from .l0 import SparseRecoverySketch

_BIG_BUDGET = 1 << 62


class StreamError(ValueError):
    """Malformed stream file or turnstile-discipline violation."""


class SketchRecoveryError(RuntimeError):
    """A sparse-recovery bank failed to return a vertex's full edge set."""

    def __init__(self, vertices):
        super().__init__(f"sparse recovery incomplete for vertices {list(vertices)[:10]}")
        self.vertices = list(vertices)


class StreamEvent(NamedTuple):
    op: int  # +1 insert, -1 delete
    u: int
    v: int


def level_exponents(beta: int) -> tuple[float, ...]:
    """q_i = 1/2^(beta-i) for i = 1..beta."""
    return tuple(1.0 / 2 ** (beta - i) for i in range(1, beta + 1))


def level_budget(n: int, q: float) -> int:
    """Stored-edge budget ceil(2 * n^q * ln n), at least 1."""
    return max(1, math.ceil(2.0 * n**q * math.log(max(n, 2))))


@dataclass(frozen=True)
class LevelAssignment:
    beta: int
    n: int
    level: np.ndarray  # per vertex, in [1, beta]
    budgets: tuple     # per level 1..beta; None at level beta (store all)

    @property
    def exponents(self) -> tuple[float, ...]:
        return level_exponents(self.beta)

    def budget_array(self) -> np.ndarray:
        per_level = np.array(
            [b if b is not None else _BIG_BUDGET for b in self.budgets], np.int64
        )
        return per_level[self.level - 1]


def assign_levels(n: int, beta: int, seed: int) -> LevelAssignment:
    """Pre-stream level sampling: independent promotion chains per vertex."""
    if beta < 1:
        raise ValueError("beta must be >= 1")
    q = level_exponents(beta)
    level = np.ones(n, np.int64)
    ids = np.arange(n, dtype=np.int64)
    for i in range(2, beta + 1):
        promote = u01_array(fold(seed, CTX_LEVELS, i), ids) < float(n) ** (-q[i - 2])
        level[(level == i - 1) & promote] = i
    budgets = tuple(level_budget(n, q[i - 1]) for i in range(1, beta)) + (None,)
    return LevelAssignment(beta=beta, n=n, level=level, budgets=budgets)


# --- event handling ----------------------------------------------------------


def _as_events(events, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Normalize to (ops, us, vs) int64 arrays and bounds-check them."""
    if isinstance(events, tuple) and len(events) == 3:
        ops, us, vs = (np.asarray(a) for a in events)
    else:
        rows = [(e[0], e[1], e[2]) if len(e) == 3 else (1, e[0], e[1]) for e in events]
        if rows:
            arr = np.asarray(rows, np.int64)
            ops, us, vs = arr[:, 0], arr[:, 1], arr[:, 2]
        else:
            ops = us = vs = np.empty(0, np.int64)
    ops = ops.astype(np.int64)
    us = us.astype(np.int64)
    vs = vs.astype(np.int64)
    if us.size:
        if min(us.min(), vs.min()) < 0 or max(us.max(), vs.max()) >= n:
            raise StreamError(f"endpoint outside [0, {n})")
        if (us == vs).any():
            raise StreamError("self-loop event")
        if (np.abs(ops) != 1).any():
            raise StreamError("event op must be +1 or -1")
    return ops, us, vs


def validate_turnstile(n: int, ops, us, vs) -> set:
    """Enforce insert-before-delete and no duplicate inserts.

    Returns the final edge set as canonical (u, v) pairs with u < v.
    """
    present = set()
    for i in range(len(ops)):
        a, b = int(us[i]), int(vs[i])
        e = (a, b) if a < b else (b, a)
        if ops[i] > 0:
            if e in present:
                raise StreamError(f"event {i}: duplicate insert of edge {e}")
            present.add(e)
        else:
            if e not in present:
                raise StreamError(f"event {i}: delete of absent edge {e}")
            present.remove(e)
    return present


def write_stream(path, n: int, ops, us, vs) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"# n={n}\n")
        for o, a, b in zip(np.asarray(ops).tolist(), np.asarray(us).tolist(), np.asarray(vs).tolist()):
            f.write(f"{'+' if o > 0 else '-'} {a} {b}\n")


def read_stream(path) -> tuple[int, np.ndarray, np.ndarray, np.ndarray]:
    """Read "(+|-) u v" lines with a "# n=<N>" header; format checks only."""
    n = None
    ops, us, vs = [], [], []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                stripped = line[1:].strip().replace(" ", "")
                if stripped.startswith("n="):
                    n = int(stripped[2:])
                continue
            parts = line.split()
            if len(parts) != 3 or parts[0] not in ("+", "-"):
                raise StreamError(f"{path}:{lineno}: expected '(+|-) u v', got {line!r}")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError as exc:
                raise StreamError(f"{path}:{lineno}: non-integer ids") from exc
            ops.append(1 if parts[0] == "+" else -1)
            us.append(u)
            vs.append(v)
    if n is None:
        n = max(max(us, default=-1), max(vs, default=-1)) + 1
    arr = (np.asarray(ops, np.int64), np.asarray(us, np.int64), np.asarray(vs, np.int64))
    _as_events(arr, n)
    return (n, *arr)


def insertion_events_from_graph(g: Graph, seed: int):
    """The graph's edges as an insertion stream in seeded random order."""
    us, vs = g.edge_array()
    key = fold_array(fold(seed, CTX_STREAM_ORDER, 1), np.arange(us.size, dtype=np.int64))
    order = np.argsort(key, kind="stable")
    return np.ones(us.size, np.int64), us[order], vs[order]


def dynamic_events_from_graph(g: Graph, seed: int, churn: float = 0.2):
    """Insert all edges in random order; a `churn` fraction is deleted
    again at a random later point.  Returns ((ops, us, vs), final graph)."""
    us, vs = g.edge_array()
    m = us.size
    ids = np.arange(m, dtype=np.int64)
    t_ins = u01_array(fold(seed, CTX_STREAM_ORDER, 2), ids)
    doomed = u01_array(fold(seed, CTX_STREAM_ORDER, 3), ids) < churn
    t_del = t_ins + u01_array(fold(seed, CTX_STREAM_ORDER, 4), ids) * (1.0 - t_ins)
    times = np.concatenate([t_ins, t_del[doomed]])
    ops = np.concatenate([np.ones(m, np.int64), -np.ones(int(doomed.sum()), np.int64)])
    eu = np.concatenate([us, us[doomed]])
    ev = np.concatenate([vs, vs[doomed]])
    order = np.argsort(times, kind="stable")
    final = from_edges(g.n, us[~doomed], vs[~doomed])
    return (ops[order], eu[order], ev[order]), final


# --- insertion-only pass ------------------------------------------------------


@dataclass
class VertexStore:
    """Stored edges, covered flags, and per-vertex budgets after a pass."""

    levels: LevelAssignment
    rows_v: np.ndarray   # vertex the edge is stored at
    rows_w: np.ndarray   # the other endpoint
    covered: np.ndarray
    counts: np.ndarray

    @property
    def total_stored(self) -> int:
        """Stored-edge entries; an edge stored at both endpoints counts twice."""
        return int(self.rows_v.size)

    def stored(self, v: int) -> np.ndarray:
        """Other endpoints of edges stored at v (in arrival order)."""
        return self.rows_w[self.rows_v == v]


def process_insertion_stream(events, levels: LevelAssignment) -> VertexStore:
    """One pass over an insertion-only stream; each event is touched once."""
    ops, us, vs = _as_events(events, levels.n)
    if (ops < 0).any():
        raise StreamError("DELETE event in insertion-only mode")
    store_a = np.empty(2 * us.size, np.int64)
    store_b = np.empty(2 * us.size, np.int64)
    nstored, covered, counts = kernels.insertion_pass(
        us, vs, levels.level, levels.budget_array(), levels.beta, store_a, store_b
    )
    return VertexStore(
        levels=levels,
        rows_v=store_a[:nstored].copy(),
        rows_w=store_b[:nstored].copy(),
        covered=covered,
        counts=counts,
    )


def _ruling_from_rows(n, rows_v, rows_w, final_beta) -> np.ndarray:
    if n == 0:
        return np.empty(0, np.int64)
    keep = final_beta[rows_v] & final_beta[rows_w]
    g = from_edges(n, rows_v[keep], rows_w[keep])
    return np.flatnonzero(kernels.greedy_mis_masked(g.indptr, g.indices, final_beta))


def post_process(store: VertexStore, levels: LevelAssignment) -> np.ndarray:
    """Move uncovered vertices to the top level and take a greedy MIS of
    the stored subgraph among (post-move) top-level vertices."""
    final_beta = (levels.level == levels.beta) | ~store.covered
    return _ruling_from_rows(levels.n, store.rows_v, store.rows_w, final_beta)


def stream_ruling_set(events, levels: LevelAssignment) -> tuple[np.ndarray, VertexStore]:
    """Insertion-only pipeline: pass + post-processing."""
    store = process_insertion_stream(events, levels)
    return post_process(store, levels), store


# --- insertion-deletion pass --------------------------------------------------


@dataclass
class DynamicResult:
    ruling_set: np.ndarray
    covered: np.ndarray
    final_degree: np.ndarray   # per-vertex level-filtered degree after the stream
    sketch_cells: int
    recovered_rows: int


def _segment_arange(counts: np.ndarray) -> np.ndarray:
    total = int(counts.sum())
    idx = np.arange(total, dtype=np.int64)
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    return idx - starts


def process_dynamic_stream(
    events, levels: LevelAssignment, delta: float = 0.01, seed: int = 0,
    details: bool = False,
):
    """Insertion-deletion pass via per-vertex sparse recovery sketches.

    Every vertex sketches its level-filtered dynamic edge set (filter
    fixed pre-stream) alongside an exact counter of that set's size;
    after the pass, covered flags come from the counters and the edge
    sets of (post-move) top-level vertices are recovered from the
    sketches.  Incomplete recovery raises SketchRecoveryError rather
    than passing silently.
    """
    n = levels.n
    beta = levels.beta
    ops, us, vs = _as_events(events, n)
    validate_turnstile(n, ops, us, vs)
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must be in (0, 1]")
    rows = max(4, math.ceil(math.log2(1.0 / delta) / 2.0))
    level = levels.level
    budget = levels.budget_array()
    qdeg = np.zeros(n, np.int64)
    mu = (level[vs] >= level[us]) | (level[us] == beta)
    mv = (level[us] >= level[vs]) | (level[vs] == beta)
    np.add.at(qdeg, us[mu], ops[mu])
    np.add.at(qdeg, vs[mv], ops[mv])
    covered = (level != beta) & (qdeg >= budget)
    final_beta = (level == beta) | ~covered
    lo = np.minimum(us, vs)
    hi = np.maximum(us, vs)
    edge_id = lo * n + hi
    rows_v_parts, rows_w_parts = [], []
    failures: list[int] = []
    cells = 0
    for lvl in range(1, beta + 1):
        slot_ids = np.flatnonzero(level == lvl)
        if slot_ids.size == 0:
            continue
        cap = levels.budgets[lvl - 1] if lvl < beta else max(1, n - 1)
        sketch = SparseRecoverySketch(
            slot_ids.size, cap, n * n, fold(seed, CTX_SKETCH, lvl),
            slot_keys=slot_ids, rows=rows,
        )
        cells += sketch.cell_count
        slot_of = np.full(n, -1, np.int64)
        slot_of[slot_ids] = np.arange(slot_ids.size, dtype=np.int64)
        pu = (level[us] == lvl) & mu
        pv = (level[vs] == lvl) & mv
        sketch.apply(
            np.concatenate([slot_of[us[pu]], slot_of[vs[pv]]]),
            np.concatenate([edge_id[pu], edge_id[pv]]),
            np.concatenate([ops[pu], ops[pv]]),
        )
        caps = np.where(final_beta[slot_ids], qdeg[slot_ids], 0)
        items, offs, got, leftover = sketch.recover(caps)
        bad = final_beta[slot_ids] & (leftover | (got != caps))
        failures.extend(slot_ids[bad].tolist())
        pick = np.repeat(offs[:-1], got) + _segment_arange(got)
        owners = np.repeat(slot_ids, got)
        rec = items[pick]
        a = rec // n
        b = rec % n
        rows_v_parts.append(owners)
        rows_w_parts.append(np.where(a == owners, b, a))
    if failures:
        raise SketchRecoveryError(sorted(failures))
    rows_v = np.concatenate(rows_v_parts) if rows_v_parts else np.empty(0, np.int64)
    rows_w = np.concatenate(rows_w_parts) if rows_w_parts else np.empty(0, np.int64)
    out = _ruling_from_rows(n, rows_v, rows_w, final_beta)
    if details:
        return DynamicResult(
            ruling_set=out,
            covered=covered,
            final_degree=qdeg,
            sketch_cells=cells,
            recovered_rows=int(rows_v.size),
        )
    return out

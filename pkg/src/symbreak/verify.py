"""Ground-truth oracles: independence, beta-hop coverage, brute force.

These run on the full graph, recompute from scratch per verdict, and
share no state with the algorithms they check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import Graph

BRUTE_FORCE_LIMIT = 20


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        w = self.witness
        return {"ok": self.ok, "witness": list(w) if w is not None else None}


def _as_vertex_array(g: Graph, s) -> np.ndarray:
    arr = np.unique(np.asarray(list(s) if not isinstance(s, np.ndarray) else s, dtype=np.int64))
    if arr.size and (arr.min() < 0 or arr.max() >= g.n):
        raise ValueError(f"member id out of range [0, {g.n})")
    return arr


def is_independent_set(g: Graph, s) -> Verdict:
    """ok iff no edge of g has both endpoints in s; witness = offending edge."""
    members = _as_vertex_array(g, s)
    mask = np.zeros(g.n, np.bool_)
    mask[members] = True
    src = np.repeat(np.arange(g.n, dtype=np.int64), g.degrees)
    bad = mask[src] & mask[g.indices] & (src < g.indices)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        return Verdict(False, (int(src[i]), int(g.indices[i])))
    return Verdict(True)


def is_beta_ruling_set(g: Graph, s, beta: int) -> Verdict:
    """ok iff s is independent and every vertex is within beta hops of s.

    The failure witness is (vertex, true distance), with distance -1 for
    a vertex s cannot reach at all.
    """
    if beta < 1:
        raise ValueError("beta must be >= 1")
    ind = is_independent_set(g, s)
    if not ind.ok:
        return ind
    members = _as_vertex_array(g, s)
    if g.n == 0:
        return Verdict(True)
    if members.size == 0:
        return Verdict(False, (0, -1))
    dist = kernels.bfs_distances(g.indptr, g.indices, members)
    far = (dist < 0) | (dist > beta)
    if far.any():
        v = int(np.flatnonzero(far)[0])
        return Verdict(False, (v, int(dist[v])))
    return Verdict(True)


def brute_force_all_mis(g: Graph) -> list[np.ndarray]:
    """Exhaustively enumerate all maximal independent sets (n <= 20)."""
    if g.n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_LIMIT}")
    n = g.n
    if n == 0:
        return [np.empty(0, np.int64)]
    nbr_mask = np.zeros(n, np.int64)
    for v in range(n):
        nbr_mask[v] = int(np.bitwise_or.reduce(1 << g.neighbors(v).astype(np.int64), initial=0))
    subsets = np.arange(1 << n, dtype=np.int64)
    independent = np.ones(subsets.size, np.bool_)
    dominating = np.ones(subsets.size, np.bool_)
    for v in range(n):
        has_v = (subsets >> v) & 1 == 1
        hits_nbr = (subsets & nbr_mask[v]) != 0
        independent &= ~(has_v & hits_nbr)
        dominating &= has_v | hits_nbr
    out = []
    for mask in subsets[independent & dominating].tolist():
        out.append(np.flatnonzero([(mask >> v) & 1 for v in range(n)]).astype(np.int64))
    return out

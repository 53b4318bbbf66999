"""k-machine ruling-set algorithms.

Three algorithms share the superstep engine: the hierarchical-sampling
beta-ruling set (iterative mark / inform / MIS-on-sample / deactivate),
the two-phase 2-ruling set (sequential per-machine local MIS, then the
message-efficient algorithm on the residual graph), and the
message-efficient 2-ruling set itself (fixed 1/2d marking with a
sampling-based check before each expensive local broadcast).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._rng import (
    CTX_ALG2_MARK,
    CTX_ALG2_MIS,
    CTX_ALG4,
    CTX_ALG4_MARK,
    CTX_ALG4_SAMPLE,
    CTX_PHASE2,
    CTX_SIM_ROUTE,
    fold,
    u01_array,
)
from .beeping import IN, BeepingMIS, simulate_on_partition
from .graph import Graph, induced_subgraph
from .kmachine import Engine, Partition, RoundMetrics, default_budget, partition_vertices, route_arrays

CAT_UNDECIDED = 0
CAT_1 = 1
CAT_2 = 2
CAT_3 = 3

_MAX_SAMPLES_PER_NODE = 64


def _flat_edges(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    return np.repeat(np.arange(g.n, dtype=np.int64), g.degrees), g.indices.astype(np.int64)


def _mis_on_members(g, part, engine, members, seed_state) -> np.ndarray:
    """MIS of G[members] via the beeping simulation; returns global ids."""
    if members.size == 0:
        return members
    sub, ids = induced_subgraph(g, members)
    subpart = Partition(sub, part.host[ids], part.k)
    dec, _ = simulate_on_partition(BeepingMIS(), sub, subpart, engine, seed_state)
    return ids[dec == IN]


def _inform_neighbors(g, part, engine, senders_mask, esrc, edst, seed_state) -> np.ndarray:
    """Senders tell every neighbor (id payload); returns has-sender-neighbor flags."""
    hot = senders_mask[esrc]
    informed = np.zeros(g.n, np.bool_)
    informed[edst[hot]] = True
    cross = hot & (part.host[esrc] != part.host[edst])
    consumed = route_arrays(engine, part.host[esrc[cross]], part.host[edst[cross]], seed_state)
    if consumed == 0:
        engine.metrics.rounds += 1
    return informed


def mark_probability(n: int, delta: int, i: int, beta: int) -> float:
    """Iteration-i marking probability min(1, 4 ln n / Delta^(1-(i-1)/beta))."""
    thr = float(delta) ** (1.0 - (i - 1) / beta) if delta >= 1 else 0.0
    if thr <= 1.0:
        return 1.0
    return min(1.0, 4.0 * math.log(n) / thr)


def beta_ruling_set_kmachine(
    g: Graph, beta: int, k: int, seed: int, budget: int | None = None
) -> tuple[np.ndarray, RoundMetrics]:
    """Hierarchical-sampling beta-ruling set on the k-machine engine.

    Iterations 2..beta: active nodes mark with probability
    min(1, 4 ln n / Delta^(1-(i-1)/beta)), marked nodes inform all
    neighbors, an MIS of the marked subgraph joins the output, and an
    unmarked node with a marked neighbor or degree above the iteration
    threshold deactivates.  A final MIS of the survivors completes the
    set.  Delta is the max degree of the original graph, fixed up front.
    """
    if beta < 1:
        raise ValueError("beta must be >= 1")
    if k < 2:
        raise ValueError("k must be >= 2")
    part = partition_vertices(g, k, seed)
    engine = Engine(k, budget if budget is not None else default_budget(g.n))
    n = g.n
    delta = g.max_degree
    deg = g.degrees
    esrc, edst = _flat_edges(g)
    active = np.ones(n, np.bool_)
    pieces = []
    for i in range(2, beta + 1):
        thr = float(delta) ** (1.0 - (i - 1) / beta) if delta >= 1 else 0.0
        p_i = mark_probability(n, delta, i, beta)
        coin = u01_array(fold(seed, CTX_ALG2_MARK, i), np.arange(n, dtype=np.int64))
        marked = active & (coin < p_i)
        has_marked_nbr = _inform_neighbors(
            g, part, engine, marked, esrc, edst, fold(seed, CTX_ALG2_MARK, i, 5)
        )
        pieces.append(_mis_on_members(g, part, engine, np.flatnonzero(marked), fold(seed, CTX_ALG2_MIS, i)))
        deactivate = active & ~marked & (has_marked_nbr | (deg > thr))
        active = active & ~marked & ~deactivate
        if active.any():
            assert deg[active].max() <= thr, "survivor degree above iteration threshold"
    _inform_neighbors(g, part, engine, active, esrc, edst, fold(seed, CTX_ALG2_MARK, 0, 10))
    pieces.append(_mis_on_members(g, part, engine, np.flatnonzero(active), fold(seed, CTX_ALG2_MIS, 0)))
    out = np.unique(np.concatenate(pieces)) if pieces else np.empty(0, np.int64)
    return out, engine.metrics


# --- message-efficient 2-ruling set (Algorithm 4) ---------------------------


def sample_size(d: int) -> int:
    """Checking-sample size ceil(4*log2(d+2)); >= 1 even for degree 1."""
    return math.ceil(4.0 * math.log2(d + 2))


def _msg_two_ruling_on_partition(
    g: Graph, part: Partition, engine: Engine, seed_state: int
) -> tuple[np.ndarray, int]:
    """Run the fixed-probability 2-ruling set on an existing partition.

    Returns (per-node category array, abstract message count).  Message
    accounting is the point-to-point count of the underlying algorithm:
    category queries and replies, degree broadcasts by surviving marked
    nodes, and membership announcements by new category-1 nodes.  The
    engine meanwhile counts what the aggregated k-machine implementation
    actually routes (at most one broadcast per machine per destination
    vertex, carrying the highest (degree, id) the machine hosts).
    """
    n = g.n
    deg = g.degrees
    host = part.host
    status = np.zeros(n, np.int8)
    status[deg == 0] = CAT_1  # no neighbor can ever veto an isolated node
    esrc, edst = _flat_edges(g)
    hsrc = host[esrc] if n else np.empty(0, np.int64)
    hdst = host[edst] if n else np.empty(0, np.int64)
    ids = np.arange(n, dtype=np.int64)
    rank = deg.astype(np.int64) * n + ids  # lexicographic (degree, id)
    ssize = np.array([sample_size(int(d)) if d > 0 else 0 for d in deg], np.int64)
    if ssize.size and ssize.max() >= _MAX_SAMPLES_PER_NODE:
        raise ValueError("sample size exceeds key budget")
    pending = np.zeros(n, np.bool_)
    msg = 0
    it = 0
    cap = 64 * (g.max_degree + 2) * math.ceil(math.log2(n + 2))
    while (status == CAT_UNDECIDED).any():
        it += 1
        if it > cap:
            raise RuntimeError(f"2-ruling set failed to decide within {cap} iterations")
        newly_c2 = (status == CAT_UNDECIDED) & pending
        status[newly_c2] = CAT_2
        pending[:] = False
        und = status == CAT_UNDECIDED
        coin = u01_array(fold(seed_state, CTX_ALG4_MARK, it), ids)
        marked = und & (coin < 1.0 / (2.0 * np.maximum(deg, 1)))
        if not marked.any():
            engine.metrics.rounds += 1
            continue
        mids = np.flatnonzero(marked)
        sizes = ssize[mids]
        owners = np.repeat(mids, sizes)
        jdx = np.concatenate([np.arange(s, dtype=np.int64) for s in sizes])
        pick = u01_array(
            fold(seed_state, CTX_ALG4_SAMPLE, it), owners * _MAX_SAMPLES_PER_NODE + jdx
        )
        targets = g.indices[g.indptr[owners] + (pick * deg[owners]).astype(np.int64)]
        msg += 2 * int(owners.size)
        qcross = host[owners] != host[targets]
        r = route_arrays(engine, host[owners[qcross]], host[targets[qcross]],
                         fold(seed_state, CTX_SIM_ROUTE, it, 1))
        engine.metrics.rounds += max(0, 1 - r)
        r = route_arrays(engine, host[targets[qcross]], host[owners[qcross]],
                         fold(seed_state, CTX_SIM_ROUTE, it, 2))
        engine.metrics.rounds += max(0, 1 - r)
        saw_c2 = np.zeros(n, np.bool_)
        hit = status[targets] == CAT_2
        saw_c2[owners[hit]] = True
        status[marked & saw_c2] = CAT_3
        bcast = marked & ~saw_c2
        if bcast.any():
            msg += int(deg[bcast].sum())
            hot = bcast[esrc]
            cross = hot & (hsrc != hdst)
            agg = np.unique(hsrc[cross] * n + edst[cross])
            r = route_arrays(engine, agg // n, host[agg % n], fold(seed_state, CTX_SIM_ROUTE, it, 3))
            engine.metrics.rounds += max(0, 1 - r)
            best = np.full(n, -1, np.int64)
            np.maximum.at(best, edst[hot], rank[esrc[hot]])
            survivors = bcast & (best < rank)
            status[survivors] = CAT_1
            if survivors.any():
                msg += int(deg[survivors].sum())
                hot2 = survivors[esrc]
                pending[edst[hot2]] = True
                cross2 = hot2 & (hsrc != hdst)
                agg2 = np.unique(hsrc[cross2] * n + edst[cross2])
                r = route_arrays(engine, agg2 // n, host[agg2 % n],
                                 fold(seed_state, CTX_SIM_ROUTE, it, 4))
                engine.metrics.rounds += max(0, 1 - r)
        else:
            engine.metrics.rounds += 1
    return status, msg


def msg_efficient_two_ruling(
    g: Graph, k: int, seed: int, budget: int | None = None
) -> tuple[np.ndarray, RoundMetrics, int]:
    """Message-efficient 2-ruling set; returns (set, metrics, msg count)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    part = partition_vertices(g, k, seed)
    engine = Engine(k, budget if budget is not None else default_budget(g.n))
    status, msg = _msg_two_ruling_on_partition(g, part, engine, fold(seed, CTX_ALG4))
    return np.flatnonzero(status == CAT_1), engine.metrics, msg


# --- two-phase 2-ruling set (Algorithm 3) ------------------------------------


@dataclass(frozen=True)
class TwoPhaseConfig:
    eps: float
    k: int

    def __post_init__(self):
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError("eps must be in [0, 1]")
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if math.ceil(self.k**self.eps) > self.k:
            raise ValueError("ceil(k^eps) exceeds k")


def optimal_eps(n: int, k: int) -> float:
    """eps minimizing n/k^(2-eps) + k^(1-eps): (3 - log n/log k)/2, clamped."""
    if k < 2:
        raise ValueError("k must be >= 2")
    e = 0.5 * (3.0 - math.log(max(n, 2)) / math.log(k))
    return min(1.0, max(0.0, e))


@dataclass
class Phase1Result:
    joined: np.ndarray     # the independent set I built by the local MISes
    deactivated: np.ndarray  # bool mask: decided OUT during or after the loop
    residual: np.ndarray   # bool mask: still active (the Phase-2 input)


def phase1_sequential_mis(g: Graph, part: Partition, engine: Engine, iters: int) -> Phase1Result:
    """Phase 1: machines 1..iters (= ceil(k^eps)) locally compute MISes in turn.

    Each S_i is disseminated in batches of k-1 ids (one direct round,
    one relay-broadcast round per batch); every machine then deactivates
    neighbors of S_i.  Afterwards any still-active vertex with a
    neighbor hosted on a processed machine deactivates (its machine
    knows hosts of neighbors under KT1, so this is local).
    """
    n = g.n
    k = part.k
    host = part.host
    status = np.zeros(n, np.int8)  # 0 active, 1 joined, 2 deactivated
    esrc, edst = _flat_edges(g)
    for i in range(iters):
        mine = (host == i) & (status == 0)
        s_mask = kernels.greedy_mis_masked(g.indptr, g.indices, mine)
        s_ids = np.flatnonzero(s_mask)
        status[s_ids] = 1
        others = np.setdiff1d(np.arange(k, dtype=np.int64), [i])
        for lo in range(0, s_ids.size, k - 1):
            width = min(k - 1, s_ids.size - lo)
            engine.superstep(np.full(width, i, np.int64), others[:width])
            relays = others[:width]
            rsrc = np.repeat(relays, k - 2) if k > 2 else np.empty(0, np.int64)
            rdst_parts = [np.setdiff1d(np.arange(k, dtype=np.int64), [int(r), i]) for r in relays]
            rdst = np.concatenate(rdst_parts) if rdst_parts and k > 2 else np.empty(0, np.int64)
            engine.superstep(rsrc, rdst)
        in_s = np.zeros(n, np.bool_)
        in_s[s_ids] = True
        nbr_of_s = np.zeros(n, np.bool_)
        nbr_of_s[edst[in_s[esrc]]] = True
        status[(status == 0) & nbr_of_s] = 2
    low = host < iters
    has_low_nbr = np.zeros(n, np.bool_)
    has_low_nbr[edst[low[esrc]]] = True
    status[(status == 0) & has_low_nbr] = 2
    return Phase1Result(
        joined=np.flatnonzero(status == 1),
        deactivated=status == 2,
        residual=status == 0,
    )


def two_phase_two_ruling(
    g: Graph, cfg: TwoPhaseConfig, seed: int, budget: int | None = None
) -> tuple[np.ndarray, RoundMetrics]:
    """Two-phase 2-ruling set: sequential local MISes, then the
    message-efficient algorithm on the residual graph."""
    part = partition_vertices(g, cfg.k, seed)
    engine = Engine(cfg.k, budget if budget is not None else default_budget(g.n))
    p1 = phase1_sequential_mis(g, part, engine, math.ceil(cfg.k**cfg.eps))
    residual_ids = np.flatnonzero(p1.residual)
    if residual_ids.size:
        sub, ids = induced_subgraph(g, residual_ids)
        subpart = Partition(sub, part.host[ids], cfg.k)
        status, _ = _msg_two_ruling_on_partition(sub, subpart, engine, fold(seed, CTX_PHASE2))
        extra = ids[status == CAT_1]
    else:
        extra = np.empty(0, np.int64)
    return np.unique(np.concatenate([p1.joined, extra])), engine.metrics

"""The k-machine execution model.

k machines form a clique; each directed link carries at most B messages
of W id-sized words per synchronous round.  Vertices are hosted
uniformly at random with KT1 knowledge (a machine knows the host of
every neighbor of its vertices).  Message delivery uses the randomized
two-hop routing scheme: mark a ~k-message batch per machine, scatter it
by random permutation (rank i goes to intermediate i mod k), then relay
deterministically to the final destination, repeating until drained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._rng import (
    CTX_PARTITION,
    CTX_ROUTE_MARK,
    CTX_ROUTE_PERM,
    fold,
    fold_array,
    u01_array,
)
from .graph import Graph

DEFAULT_WORDS = 3


def default_budget(n: int) -> int:
    """Per-link round budget B = ceil(log2 n), at least 1."""
    return max(1, math.ceil(math.log2(max(n, 2))))


@dataclass
class RoundMetrics:
    rounds: int = 0
    total_messages: int = 0
    max_link_load_per_round: int = 0

    def merge(self, other: "RoundMetrics") -> None:
        self.rounds += other.rounds
        self.total_messages += other.total_messages
        self.max_link_load_per_round = max(
            self.max_link_load_per_round, other.max_link_load_per_round
        )

    def to_json(self) -> dict:
        return {
            "rounds": self.rounds,
            "total_messages": self.total_messages,
            "max_link_load_per_round": self.max_link_load_per_round,
        }


class Message(NamedTuple):
    src_machine: int
    dst_machine: int
    payload: tuple

    def check(self, k: int, words: int = DEFAULT_WORDS) -> "Message":
        if not (0 <= self.src_machine < k and 0 <= self.dst_machine < k):
            raise ValueError(f"machine id out of range: {self}")
        if self.src_machine == self.dst_machine:
            raise ValueError(f"src == dst in {self}")
        if len(self.payload) > words:
            raise ValueError(f"payload wider than {words} words: {self}")
        return self


class Partition:
    """Random vertex partition with KT1 host views."""

    def __init__(self, g: Graph, host: np.ndarray, k: int):
        host = np.asarray(host, dtype=np.int64)
        if host.size != g.n:
            raise ValueError("host map size mismatch")
        if host.size and (host.min() < 0 or host.max() >= k):
            raise ValueError("host machine out of range")
        self.graph = g
        self.host = host
        self.k = k

    def hosted(self, machine: int) -> np.ndarray:
        return np.flatnonzero(self.host == machine)

    def host_view(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        """KT1 view for v: (neighbor ids, hosting machine of each neighbor)."""
        nbrs = self.graph.neighbors(v)
        return nbrs, self.host[nbrs]


def partition_vertices(g: Graph, k: int, seed: int) -> Partition:
    """Assign each vertex to a machine independently and uniformly."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    state = fold(seed, CTX_PARTITION)
    host = (fold_array(state, np.arange(g.n, dtype=np.int64)) % np.uint64(k)).astype(np.int64)
    return Partition(g, host, k)


class Engine:
    """Synchronous superstep engine with per-link budget B.

    A superstep delivers a set of send intents; a link carrying L
    messages drains B per round, so the intents consume ceil(Lmax/B)
    rounds (minimum 1).  Messages with src == dst are local handoffs:
    delivered instantly, not counted as network traffic.
    """

    def __init__(self, k: int, budget: int, words: int = DEFAULT_WORDS):
        if k < 2:
            raise ValueError("k must be >= 2")
        if budget < 1:
            raise ValueError("budget must be >= 1")
        self.k = k
        self.budget = budget
        self.words = words
        self.metrics = RoundMetrics()

    def _account(self, src: np.ndarray, dst: np.ndarray, min_rounds: int) -> int:
        if dst.size and (dst.min() < 0 or dst.max() >= self.k):
            raise ValueError("message addressed to nonexistent machine")
        cross = src != dst
        count = int(cross.sum())
        rounds = min_rounds
        if count:
            loads = np.bincount(src[cross] * self.k + dst[cross], minlength=self.k * self.k)
            lmax = int(loads.max())
            rounds = max(rounds, -(-lmax // self.budget))
            per_round = min(self.budget, lmax)
            assert per_round <= self.budget
            self.metrics.max_link_load_per_round = max(
                self.metrics.max_link_load_per_round, per_round
            )
        self.metrics.rounds += rounds
        self.metrics.total_messages += count
        return rounds

    def superstep(self, src: np.ndarray, dst: np.ndarray, min_rounds: int = 1) -> int:
        """Deliver one barrier's send intents; returns rounds consumed."""
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        return self._account(src, dst, min_rounds)


def route_arrays(
    engine: Engine,
    src: np.ndarray,
    dst: np.ndarray,
    seed_state: int,
) -> int:
    """Randomized routing of a message batch; returns rounds consumed.

    Implements the three-step scheme: (1) each machine marks each unsent
    message with probability min(k/Y, 1) for Y unsent messages it holds,
    (2) marked messages scatter by random permutation, rank i to
    intermediate machine i mod k, (3) intermediates relay to the final
    destinations, at most B per link per round, FIFO.  Repeats until all
    messages are delivered.  Payloads ride along untouched; delivery is
    exactly-once by construction (uids partition into delivered/pending).
    """
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    k = engine.k
    if dst.size and (dst.min() < 0 or dst.max() >= k):
        raise ValueError("message addressed to nonexistent machine")
    uid = np.flatnonzero(src != dst)  # local messages deliver free
    cur = src[uid]
    fdst = dst[uid]
    mark_state = fold(seed_state, CTX_ROUTE_MARK)
    perm_state = fold(seed_state, CTX_ROUTE_PERM)
    rounds = 0
    batch = 0
    while uid.size:
        y = np.bincount(cur, minlength=k)
        prob = np.minimum(k / np.maximum(y[cur], 1), 1.0)
        coin = u01_array(fold(mark_state, batch), uid)
        marked = coin < prob
        if marked.any():
            mcur = cur[marked]
            mdst = fdst[marked]
            perm = fold_array(fold(perm_state, batch), uid[marked])
            order = np.lexsort((perm, mcur))
            ranks = np.empty(order.size, np.int64)
            counts = np.bincount(mcur, minlength=k)
            starts = np.repeat(np.cumsum(counts) - counts, counts)
            ranks[order] = np.arange(order.size, dtype=np.int64) - starts
            inter = ranks % k
            rounds += engine.superstep(mcur, inter, min_rounds=0)
            rounds += engine.superstep(inter, mdst, min_rounds=0)
            uid = uid[~marked]
            cur = cur[~marked]
            fdst = fdst[~marked]
        batch += 1
    return rounds


def route(
    outboxes: list[list[Message | tuple]],
    k: int,
    budget: int,
    seed: int,
    words: int = DEFAULT_WORDS,
) -> tuple[list[list[Message]], RoundMetrics]:
    """Deliver per-machine outboxes with the randomized routing scheme.

    Returns (inboxes, metrics); the delivered multiset equals the sent
    multiset, grouped by destination machine in a deterministic order.
    """
    if len(outboxes) != k:
        raise ValueError(f"expected {k} outboxes, got {len(outboxes)}")
    msgs: list[Message] = []
    for machine, box in enumerate(outboxes):
        for item in box:
            if isinstance(item, Message):
                m = item
            else:
                dst, payload = item
                m = Message(machine, int(dst), tuple(payload))
            if m.src_machine != machine:
                raise ValueError(f"outbox {machine} holds message claiming src {m.src_machine}")
            if not 0 <= m.dst_machine < k:
                raise ValueError("message addressed to nonexistent machine")
            if len(m.payload) > words:
                raise ValueError(f"payload wider than {words} words")
            msgs.append(m)
    engine = Engine(k, budget, words)
    src = np.array([m.src_machine for m in msgs], dtype=np.int64)
    dst = np.array([m.dst_machine for m in msgs], dtype=np.int64)
    route_arrays(engine, src, dst, fold(seed, 0))
    inboxes: list[list[Message]] = [[] for _ in range(k)]
    order = np.argsort(dst, kind="stable")
    for i in order.tolist():
        inboxes[msgs[i].dst_machine].append(msgs[i])
    return inboxes, engine.metrics

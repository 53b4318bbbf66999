"""Beeping-model semantics and the k-machine simulation bridge.

Per round every node either beeps or stays silent, and learns one bit:
whether at least one neighbor beeped.  Node programs are pure functions
of (state, heard flag from the previous round, per-round coin), with
coins keyed by (seed, node, round) so a local run and the k-machine
simulation flip identical coins.

The bridge aggregates beeps twice per simulated round: a machine sends
at most one notification per (remote destination vertex) no matter how
many of its hosted nodes beeped toward it, and the receiver ORs
notifications per vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._rng import CTX_BEEP, CTX_SIM_ROUTE, fold, u01_array
from .graph import Graph
from .kmachine import Engine, Partition, RoundMetrics, default_budget, partition_vertices, route_arrays

UNDECIDED = 0
IN = 1
OUT = 2


class BeepNonTermination(RuntimeError):
    """Raised when max_rounds elapse with undecided nodes."""

    def __init__(self, undecided: int, trace: "BeepTrace"):
        super().__init__(f"{undecided} nodes undecided at round cap T={trace.rounds}")
        self.undecided = undecided
        self.trace = trace


@dataclass
class BeepTrace:
    """Round-by-round record: T, degree-weighted message count, and
    (optionally) the per-round beeper sets and heard flags."""

    rounds: int = 0
    msg: int = 0
    beeps: list | None = None
    heard: list | None = None

    def to_json(self, verbose: bool = False) -> dict:
        out = {"T": self.rounds, "msg": self.msg}
        if verbose and self.beeps is not None:
            out["per_round"] = [{"beepers": b.tolist()} for b in self.beeps]
        return out


def traces_equal(a: BeepTrace, b: BeepTrace) -> bool:
    if a.rounds != b.rounds or a.msg != b.msg:
        return False
    if a.beeps is not None and b.beeps is not None:
        if len(a.beeps) != len(b.beeps):
            return False
        for x, y in zip(a.beeps, b.beeps):
            if not np.array_equal(x, y):
                return False
        for x, y in zip(a.heard, b.heard):
            if not np.array_equal(x, y):
                return False
    return True


def node_coins(seed: int, t: int, n: int) -> np.ndarray:
    """One uniform [0,1) coin per node for round t, keyed (seed, node, t)."""
    return u01_array(fold(seed, CTX_BEEP, t), np.arange(n, dtype=np.int64))


def default_round_cap(n: int) -> int:
    """64 * ceil(log2(n+2)) round-pairs, in raw beep rounds."""
    return 2 * 64 * math.ceil(math.log2(n + 2))


class BeepingMIS:
    """MIS by paired beep rounds with feedback-adjusted beep probability.

    Round A: each undecided node beeps with probability 2**-e.  Round B:
    a node that beeped in A and heard nothing beeps again and decides
    IN; an undecided node hearing a B-beep decides OUT.  The exponent e
    rises by one after a contended A round (heard a beep) and falls
    toward 1 after a silent one, so dense neighborhoods settle at the
    win-rate sweet spot.  Winner independence is structural: adjacent
    A-beepers hear each other and neither wins.
    """

    def init_state(self, g: Graph) -> dict:
        n = g.n
        return {
            "decision": np.zeros(n, np.int8),
            "exp": np.ones(n, np.int64),
            "emax": math.ceil(math.log2(n + 2)) + 2,
            "beeped_a": np.zeros(n, np.bool_),
        }

    def step(self, g: Graph, state: dict, heard_prev: np.ndarray, coin: np.ndarray, t: int):
        dec = state["decision"]
        if t % 2 == 0:
            und = dec == UNDECIDED
            if t > 0:
                dec[und & heard_prev] = OUT  # a neighbor won the previous B round
                und = dec == UNDECIDED
            beep = und & (coin < np.ldexp(1.0, -state["exp"]))
            state["beeped_a"] = beep
            return beep
        und = dec == UNDECIDED
        winners = state["beeped_a"] & und & ~heard_prev
        dec[winners] = IN
        still = dec == UNDECIDED
        e = state["exp"]
        up = still & heard_prev
        down = still & ~heard_prev
        e[up] = np.minimum(e[up] + 1, state["emax"])
        e[down] = np.maximum(e[down] - 1, 1)
        return winners


def run_beeping(
    prog,
    g: Graph,
    seed: int,
    max_rounds: int | None = None,
    record_rounds: bool = False,
) -> tuple[np.ndarray, BeepTrace]:
    """Execute a beeping program locally until all nodes decide.

    Raises BeepNonTermination if max_rounds elapse with undecided nodes.
    """
    if max_rounds is None:
        max_rounds = default_round_cap(g.n)
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    state = prog.init_state(g)
    dec = state["decision"]
    degrees = g.degrees
    trace = BeepTrace(beeps=[] if record_rounds else None, heard=[] if record_rounds else None)
    heard_prev = np.zeros(g.n, np.bool_)
    for t in range(max_rounds):
        coin = node_coins(seed, t, g.n)
        beep = prog.step(g, state, heard_prev, coin, t)
        if not beep.any() and (dec != UNDECIDED).all():
            break
        heard = kernels.heard_flags(g.indptr, g.indices, beep)
        trace.rounds += 1
        trace.msg += int(degrees[beep].sum())
        if record_rounds:
            trace.beeps.append(np.flatnonzero(beep))
            trace.heard.append(heard.copy())
        heard_prev = heard
    undecided = int((dec == UNDECIDED).sum())
    if undecided:
        raise BeepNonTermination(undecided, trace)
    return dec.copy(), trace


def simulate_on_partition(
    prog,
    g: Graph,
    part: Partition,
    engine: Engine,
    seed: int,
    max_rounds: int | None = None,
    record_rounds: bool = False,
    notify_counts: list | None = None,
) -> tuple[np.ndarray, BeepTrace]:
    """Run a beeping program inside the k-machine engine.

    Heard flags, decisions, and the trace are bit-identical to
    run_beeping under the same seed; the engine accumulates the rounds
    and messages the dual-aggregated beep notifications cost.  When
    `notify_counts` is a list, the number of cross-machine beep
    notifications injected per simulated round is appended to it (one
    per (source machine, destination vertex) pair).
    """
    if max_rounds is None:
        max_rounds = default_round_cap(g.n)
    state = prog.init_state(g)
    dec = state["decision"]
    degrees = g.degrees
    host = part.host
    n = g.n
    esrc = np.repeat(np.arange(n, dtype=np.int64), degrees)
    edst = g.indices
    ehsrc = host[esrc] if n else np.empty(0, np.int64)
    ehdst = host[edst] if n else np.empty(0, np.int64)
    trace = BeepTrace(beeps=[] if record_rounds else None, heard=[] if record_rounds else None)
    heard_prev = np.zeros(n, np.bool_)
    for t in range(max_rounds):
        coin = node_coins(seed, t, n)
        beep = prog.step(g, state, heard_prev, coin, t)
        if not beep.any() and (dec != UNDECIDED).all():
            break
        hot = beep[esrc]
        heard = np.zeros(n, np.bool_)
        heard[edst[hot]] = True
        cross = hot & (ehsrc != ehdst)
        key = np.unique(ehsrc[cross] * n + edst[cross])
        msrc = key // n
        mdstv = key % n
        if notify_counts is not None:
            notify_counts.append(int(key.size))
        consumed = route_arrays(engine, msrc, host[mdstv], fold(seed, CTX_SIM_ROUTE, t))
        if consumed == 0:
            engine.metrics.rounds += 1  # barrier round even without traffic
        trace.rounds += 1
        trace.msg += int(degrees[beep].sum())
        if record_rounds:
            trace.beeps.append(np.flatnonzero(beep))
            trace.heard.append(heard.copy())
        heard_prev = heard
    undecided = int((dec == UNDECIDED).sum())
    if undecided:
        raise BeepNonTermination(undecided, trace)
    return dec.copy(), trace


def simulate_in_kmachine(
    prog,
    g: Graph,
    k: int,
    seed: int,
    budget: int | None = None,
    max_rounds: int | None = None,
    record_rounds: bool = False,
) -> tuple[np.ndarray, BeepTrace, RoundMetrics]:
    """Public bridge: partition g over k machines and run `prog` there."""
    if k < 2:
        raise ValueError("k must be >= 2")
    part = partition_vertices(g, k, seed)
    engine = Engine(k, budget if budget is not None else default_budget(g.n))
    dec, trace = simulate_on_partition(
        prog, g, part, engine, seed, max_rounds=max_rounds, record_rounds=record_rounds
    )
    return dec, trace, engine.metrics


def beeping_mis(g: Graph, seed: int) -> np.ndarray:
    """MIS of g via the beeping exchange; returns the sorted IN set."""
    dec, _ = run_beeping(BeepingMIS(), g, seed)
    return np.flatnonzero(dec == IN)


def mis_kmachine(
    g: Graph, k: int, seed: int, budget: int | None = None
) -> tuple[np.ndarray, RoundMetrics]:
    """MIS via the beeping simulation bridge; returns (set, metrics)."""
    dec, _, metrics = simulate_in_kmachine(BeepingMIS(), g, k, seed, budget=budget)
    return np.flatnonzero(dec == IN), metrics

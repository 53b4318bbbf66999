"""Numba lane: @njit implementations of the hot kernels.

Signatures mirror _kernels_numpy exactly; symbreak.kernels picks a lane
at import time.  All randomness comes in as pre-folded uint64 substream
states so both lanes produce bit-identical results.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_PHI = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_U11 = np.uint64(11)
_INV53 = 2.0**-53


@njit(cache=True, inline="always")
def _mix(x):
    x = x + _PHI
    x = (x ^ (x >> np.uint64(30))) * _M1
    x = (x ^ (x >> np.uint64(27))) * _M2
    return x ^ (x >> np.uint64(31))


@njit(cache=True, inline="always")
def _fold1(state, key):
    return _mix(state ^ (np.uint64(key) * _M1))


@njit(cache=True, inline="always")
def _u01(h):
    return np.float64(h >> _U11) * _INV53


@njit(cache=True)
def gnp_pairs(state, n, p):
    """Edges of G(n, p); pair (u, v) keyed by u*n+v off `state`."""
    cnt = 0
    for u in range(n):
        for v in range(u + 1, n):
            if _u01(_fold1(np.uint64(state), u * n + v)) < p:
                cnt += 1
    us = np.empty(cnt, np.int64)
    vs = np.empty(cnt, np.int64)
    w = 0
    for u in range(n):
        for v in range(u + 1, n):
            if _u01(_fold1(np.uint64(state), u * n + v)) < p:
                us[w] = u
                vs[w] = v
                w += 1
    return us, vs


@njit(cache=True)
def heard_flags(indptr, indices, beep):
    """heard[v] is True iff some neighbor of v beeps."""
    n = indptr.size - 1
    out = np.zeros(n, np.bool_)
    for v in range(n):
        for j in range(indptr[v], indptr[v + 1]):
            if beep[indices[j]]:
                out[v] = True
                break
    return out


@njit(cache=True)
def bfs_distances(indptr, indices, sources):
    """Multi-source BFS distances; -1 where unreachable."""
    n = indptr.size - 1
    dist = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    tail = 0
    for i in range(sources.size):
        s = sources[i]
        if dist[s] != 0:
            dist[s] = 0
            queue[tail] = s
            tail += 1
    head = 0
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        for j in range(indptr[u], indptr[u + 1]):
            w = indices[j]
            if dist[w] < 0:
                dist[w] = du + 1
                queue[tail] = w
                tail += 1
    return dist


@njit(cache=True)
def greedy_mis_masked(indptr, indices, allowed):
    """Greedy MIS by ascending vertex id on the induced subgraph of `allowed`."""
    n = indptr.size - 1
    state = np.zeros(n, np.int8)  # 0 free, 1 selected, 2 blocked
    for v in range(n):
        if allowed[v] and state[v] == 0:
            state[v] = 1
            for j in range(indptr[v], indptr[v + 1]):
                w = indices[j]
                if allowed[w] and state[w] == 0:
                    state[w] = 2
    return state == 1


@njit(cache=True)
def insertion_pass(us, vs, level, budget, beta, store_a, store_b):
    """Single pass over an insertion stream.

    Stores edge (u, v) at u when u is uncovered and the edge counts
    toward u's active degree (level[v] >= level[u]; top-level vertices
    store every incident edge), and symmetrically at v; an edge arriving
    when both endpoints are covered is skipped outright.  Returns (rows
    stored, covered flags, per-vertex stored counts).
    """
    n = level.size
    covered = np.zeros(n, np.bool_)
    counts = np.zeros(n, np.int64)
    ptr = 0
    for e in range(us.size):
        u = us[e]
        v = vs[e]
        cu = covered[u]
        cv = covered[v]
        if cu and cv:
            continue
        if not cu and (level[v] >= level[u] or level[u] == beta):
            store_a[ptr] = u
            store_b[ptr] = v
            ptr += 1
            counts[u] += 1
            if level[u] != beta and counts[u] >= budget[u]:
                covered[u] = True
        if not cv and (level[u] >= level[v] or level[v] == beta):
            store_a[ptr] = v
            store_b[ptr] = u
            ptr += 1
            counts[v] += 1
            if level[v] != beta and counts[v] >= budget[v]:
                covered[v] = True
    return ptr, covered, counts


@njit(cache=True, inline="always")
def _bucket(vseed, item, r, nb):
    return np.int64(_mix(vseed ^ (np.uint64(item) * _M1 + np.uint64(r + 1) * _M2)) % np.uint64(nb))


@njit(cache=True, inline="always")
def _fpval(fseed, item):
    return _mix(fseed ^ (np.uint64(item) * _M2))


@njit(cache=True)
def sketch_apply(cnt, idsum, fp, slots, items, deltas, vseeds, fseeds, rrows, nb):
    """Scatter +/-1 edge updates into per-slot recovery sketches.

    Cell layout is flat: slot s, row r, bucket b -> s*rrows*nb + r*nb + b.
    """
    for i in range(slots.size):
        s = slots[i]
        it = items[i]
        d = deltas[i]
        f = _fpval(fseeds[s], it)
        base = s * rrows * nb
        for r in range(rrows):
            j = base + r * nb + _bucket(vseeds[s], it, r, nb)
            cnt[j] += d
            idsum[j] += d * it
            if d > 0:
                fp[j] = fp[j] + f
            else:
                fp[j] = fp[j] - f


@njit(cache=True)
def sketch_peel(cnt, idsum, fp, vseeds, fseeds, rrows, nb, universe, caps):
    """Decode every slot's sketch by iterative singleton peeling.

    caps[s] is the exact number of items present in slot s (from the
    per-vertex degree counters), so out-of-capacity writes cannot occur
    for sound decodes.  Returns (items, slot offsets, per-slot recovered
    counts, per-slot leftover flags).
    """
    nslots = caps.size
    offs = np.zeros(nslots + 1, np.int64)
    for s in range(nslots):
        offs[s + 1] = offs[s] + caps[s]
    out = np.empty(offs[nslots], np.int64)
    got = np.zeros(nslots, np.int64)
    leftover = np.zeros(nslots, np.bool_)
    cells = rrows * nb
    maxcap = 0
    for s in range(nslots):
        if caps[s] > maxcap:
            maxcap = caps[s]
    stack = np.empty(cells + rrows * maxcap + 1, np.int64)
    for s in range(nslots):
        base = s * cells
        top = 0
        for j in range(base, base + cells):
            if cnt[j] == 1:
                stack[top] = j
                top += 1
        while top > 0:
            top -= 1
            j = stack[top]
            if cnt[j] != 1:
                continue
            x = idsum[j]
            if x < 0 or x >= universe:
                continue
            f = _fpval(fseeds[s], x)
            if fp[j] != f:
                continue
            if got[s] >= caps[s]:
                leftover[s] = True
                break
            out[offs[s] + got[s]] = x
            got[s] += 1
            for r in range(rrows):
                jj = base + r * nb + _bucket(vseeds[s], x, r, nb)
                cnt[jj] -= 1
                idsum[jj] -= x
                fp[jj] = fp[jj] - f
                if cnt[jj] == 1:
                    stack[top] = jj
                    top += 1
        for j in range(base, base + cells):
            if cnt[j] != 0 or fp[j] != np.uint64(0):
                leftover[s] = True
                break
    return out, offs, got, leftover

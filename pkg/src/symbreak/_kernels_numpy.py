"""NumPy lane: fallback implementations of the hot kernels.

Selected with SYMBREAK_BACKEND=numpy.  Vectorized where the operation
allows it; the inherently sequential kernels (insertion pass, peeling)
run as plain Python loops and are correspondingly slower.  Results are
bit-identical to the numba lane.
"""

from __future__ import annotations

import numpy as np

from ._rng import MASK64, _M1, _M2, mix64_array, u01_array


def gnp_pairs(state, n, p):
    """Edges of G(n, p); pair (u, v) keyed by u*n+v off `state`."""
    us_parts = []
    vs_parts = []
    for u in range(n):
        vs = np.arange(u + 1, n, dtype=np.int64)
        if vs.size == 0:
            continue
        hit = u01_array(state, u * n + vs) < p
        if hit.any():
            picked = vs[hit]
            us_parts.append(np.full(picked.size, u, np.int64))
            vs_parts.append(picked)
    if not us_parts:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return np.concatenate(us_parts), np.concatenate(vs_parts)


def heard_flags(indptr, indices, beep):
    """heard[v] is True iff some neighbor of v beeps."""
    n = indptr.size - 1
    out = np.zeros(n, np.bool_)
    if indices.size == 0:
        return out
    hot = beep[indices]
    nonempty = np.flatnonzero(np.diff(indptr) > 0)
    if nonempty.size:
        out[nonempty] = np.bitwise_or.reduceat(hot, indptr[nonempty])
    return out


def bfs_distances(indptr, indices, sources):
    """Multi-source BFS distances; -1 where unreachable."""
    n = indptr.size - 1
    dist = np.full(n, -1, np.int64)
    frontier = np.unique(np.asarray(sources, dtype=np.int64))
    dist[frontier] = 0
    d = 0
    while frontier.size:
        counts = indptr[frontier + 1] - indptr[frontier]
        total = int(counts.sum())
        if total == 0:
            break
        flat = np.repeat(indptr[frontier], counts) + _segment_arange(counts)
        nbrs = indices[flat]
        fresh = np.unique(nbrs[dist[nbrs] < 0])
        dist[fresh] = d + 1
        frontier = fresh
        d += 1
    return dist


def _segment_arange(counts):
    # [0..c0), [0..c1), ... flattened
    total = int(counts.sum())
    idx = np.arange(total, dtype=np.int64)
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    return idx - starts


def greedy_mis_masked(indptr, indices, allowed):
    """Greedy MIS by ascending vertex id on the induced subgraph of `allowed`."""
    n = indptr.size - 1
    state = np.zeros(n, np.int8)
    for v in range(n):
        if allowed[v] and state[v] == 0:
            state[v] = 1
            nbrs = indices[indptr[v] : indptr[v + 1]]
            free = nbrs[(allowed[nbrs]) & (state[nbrs] == 0)]
            state[free] = 2
    return state == 1


def insertion_pass(us, vs, level, budget, beta, store_a, store_b):
    """Single pass over an insertion stream (see numba lane docstring)."""
    n = level.size
    covered = np.zeros(n, np.bool_)
    counts = np.zeros(n, np.int64)
    ptr = 0
    for e in range(len(us)):
        u = int(us[e])
        v = int(vs[e])
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


def _buckets(vseed_arr, items, r, nb):
    x = np.uint64(int(r + 1) * _M2 & MASK64) + items.astype(np.uint64) * np.uint64(_M1)
    h = _mix_arr(vseed_arr ^ x)
    return (h % np.uint64(nb)).astype(np.int64)


def _fpvals(fseed_arr, items):
    return _mix_arr(fseed_arr ^ (items.astype(np.uint64) * np.uint64(_M2)))


_mix_arr = mix64_array


def sketch_apply(cnt, idsum, fp, slots, items, deltas, vseeds, fseeds, rrows, nb):
    """Scatter +/-1 edge updates into per-slot recovery sketches."""
    if slots.size == 0:
        return
    vs = vseeds[slots]
    fs = fseeds[slots]
    fvals = _fpvals(fs, items)
    base = slots.astype(np.int64) * (rrows * nb)
    signed_f = np.where(deltas > 0, fvals, (~fvals) + np.uint64(1))
    for r in range(rrows):
        idx = base + r * nb + _buckets(vs, items, r, nb)
        np.add.at(cnt, idx, deltas)
        np.add.at(idsum, idx, deltas * items)
        np.add.at(fp, idx, signed_f)


def sketch_peel(cnt, idsum, fp, vseeds, fseeds, rrows, nb, universe, caps):
    """Decode every slot's sketch by iterative singleton peeling."""
    nslots = caps.size
    offs = np.zeros(nslots + 1, np.int64)
    np.cumsum(caps, out=offs[1:])
    out = np.empty(int(offs[-1]), np.int64)
    got = np.zeros(nslots, np.int64)
    leftover = np.zeros(nslots, np.bool_)
    cells = rrows * nb
    for s in range(nslots):
        base = s * cells
        view_c = cnt[base : base + cells]
        stack = list(np.flatnonzero(view_c == 1))
        fseed = fseeds[s]
        vseed = vseeds[s]
        while stack:
            j = int(stack.pop())
            if cnt[base + j] != 1:
                continue
            x = int(idsum[base + j])
            if x < 0 or x >= universe:
                continue
            f = int(_fpvals(np.uint64(fseed), np.asarray([x]))[0])
            if int(fp[base + j]) != f:
                continue
            if got[s] >= caps[s]:
                leftover[s] = True
                break
            out[int(offs[s]) + int(got[s])] = x
            got[s] += 1
            for r in range(rrows):
                jj = r * nb + int(_buckets(np.uint64(vseed), np.asarray([x]), r, nb)[0])
                cnt[base + jj] -= 1
                idsum[base + jj] -= x
                fp[base + jj] = np.uint64((int(fp[base + jj]) - f) & MASK64)
                if cnt[base + jj] == 1:
                    stack.append(jj)
        if not leftover[s]:
            seg_f = fp[base : base + cells]
            if (cnt[base : base + cells] != 0).any() or (seg_f != 0).any():
                leftover[s] = True
    return out, offs, got, leftover

#!/usr/bin/env python3
"""Benchmark the numba kernel lane against the pure-numpy fallback.

Runs each hot kernel on a representative workload under both backends
and prints a timing table.  The package picks its lane at import time
via SYMBREAK_BACKEND; this script imports both lanes directly and also
double-checks that they produce identical results.
"""

import time

import numpy as np

from symbreak import _kernels_numba as nb
from symbreak import _kernels_numpy as npk
from symbreak._rng import fold, fold_array, u01_array
from symbreak.graph import gen_gnp


def timeit(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    rows = []
    g = gen_gnp(2000, 0.05, 7)
    beep = u01_array(fold(1, 2), np.arange(g.n, dtype=np.int64)) < 0.3
    sources = np.arange(0, g.n, 97, dtype=np.int64)

    state = np.uint64(fold(42, 1))
    # warm up the JIT so compile time is not measured
    nb.gnp_pairs(state, 50, 0.1)
    nb.heard_flags(g.indptr, g.indices, beep)
    nb.bfs_distances(g.indptr, g.indices, sources)
    nb.greedy_mis_masked(g.indptr, g.indices, np.ones(g.n, np.bool_))

    t_nb, a = timeit(nb.gnp_pairs, state, 1500, 0.05)
    t_np, b = timeit(npk.gnp_pairs, state, 1500, 0.05)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    rows.append(("gnp_pairs(1500, 0.05)", t_nb, t_np))

    t_nb, a = timeit(nb.heard_flags, g.indptr, g.indices, beep)
    t_np, b = timeit(npk.heard_flags, g.indptr, g.indices, beep)
    assert np.array_equal(a, b)
    rows.append(("heard_flags(n=2000, m=100k)", t_nb, t_np))

    t_nb, a = timeit(nb.bfs_distances, g.indptr, g.indices, sources)
    t_np, b = timeit(npk.bfs_distances, g.indptr, g.indices, sources)
    assert np.array_equal(a, b)
    rows.append(("bfs_distances(21 sources)", t_nb, t_np))

    allowed = np.ones(g.n, np.bool_)
    t_nb, a = timeit(nb.greedy_mis_masked, g.indptr, g.indices, allowed)
    t_np, b = timeit(npk.greedy_mis_masked, g.indptr, g.indices, allowed)
    assert np.array_equal(a, b)
    rows.append(("greedy_mis(n=2000)", t_nb, t_np))

    us, vs = g.edge_array()
    level = np.ones(g.n, np.int64)
    level[::40] = 2
    budget = np.where(level == 2, 1 << 62, 60)
    sa = np.empty(2 * us.size, np.int64)
    sb = np.empty(2 * us.size, np.int64)
    nb.insertion_pass(us[:10], vs[:10], level, budget, 2, sa, sb)  # warm
    t_nb, a = timeit(nb.insertion_pass, us, vs, level, budget, 2, sa.copy(), sb.copy())
    t_np, b = timeit(npk.insertion_pass, us, vs, level, budget, 2, sa.copy(), sb.copy(), repeat=1)
    assert a[0] == b[0] and np.array_equal(a[1], b[1])
    rows.append(("insertion_pass(100k edges)", t_nb, t_np))

    nslots, capacity, rrows = 200, 64, 4
    nbuck = capacity + 4
    vseeds = fold_array(fold(5, 1), np.arange(nslots, dtype=np.int64))
    fseeds = fold_array(fold(5, 2), np.arange(nslots, dtype=np.int64))
    raw_s = (u01_array(fold(5, 3), np.arange(20000)) * nslots).astype(np.int64)
    raw_i = (u01_array(fold(5, 4), np.arange(20000)) * 10**6).astype(np.int64)
    pair = np.unique(raw_s * 10**6 + raw_i)
    slots = pair // 10**6
    items = pair % 10**6
    deltas = np.ones(items.size, np.int64)

    def bank(mod):
        cnt = np.zeros(nslots * rrows * nbuck, np.int64)
        ids = np.zeros_like(cnt)
        fp = np.zeros(cnt.size, np.uint64)
        mod.sketch_apply(cnt, ids, fp, slots, items, deltas, vseeds, fseeds, rrows, nbuck)
        caps = np.bincount(slots, minlength=nslots).astype(np.int64)
        out, offs, got, leftover = mod.sketch_peel(
            cnt, ids, fp, vseeds, fseeds, rrows, nbuck, 10**6, caps
        )
        rec = [np.sort(out[offs[s] : offs[s] + got[s]]) for s in range(nslots)]
        return rec, got, leftover

    bank(nb)  # warm
    t_nb, a = timeit(bank, nb)
    t_np, b = timeit(bank, npk, repeat=1)
    assert all(np.array_equal(x, y) for x, y in zip(a[0], b[0]))
    assert np.array_equal(a[1], b[1]) and not a[2].any()
    rows.append(("sketch apply+peel(20k upd)", t_nb, t_np))

    print(f"{'kernel':<30} {'numba':>10} {'numpy':>10} {'speedup':>8}")
    for name, t_nb, t_np in rows:
        print(f"{name:<30} {t_nb * 1e3:>8.2f}ms {t_np * 1e3:>8.2f}ms {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()

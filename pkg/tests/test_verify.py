import numpy as np
import pytest

from symbreak import kernels
from symbreak.beeping import beeping_mis
from symbreak.graph import from_edges, gen_gadget, gen_gnp
from symbreak.verify import brute_force_all_mis, is_beta_ruling_set, is_independent_set

P5 = from_edges(5, [0, 1, 2, 3], [1, 2, 3, 4])


def test_independent_set_basic():
    k2 = from_edges(2, [0], [1])
    v = is_independent_set(k2, [0, 1])
    assert not v.ok and v.witness == (0, 1)
    assert is_independent_set(k2, []).ok
    assert is_independent_set(k2, [1]).ok


def test_independent_set_rejects_out_of_range():
    with pytest.raises(ValueError):
        is_independent_set(P5, [7])


def test_beta_ruling_set_path_cases():
    assert is_beta_ruling_set(P5, [2], 2).ok
    v = is_beta_ruling_set(P5, [0], 2)
    assert not v.ok and v.witness == (3, 3)
    # beta=1 is exactly the MIS check
    assert is_beta_ruling_set(P5, [0, 2, 4], 1).ok
    assert not is_beta_ruling_set(P5, [1], 1).ok    # vertex 3 two hops away
    assert not is_beta_ruling_set(P5, [0, 4], 1).ok  # vertex 2 uncovered


def test_empty_set_fails_coverage():
    v = is_beta_ruling_set(P5, [], 3)
    assert not v.ok and v.witness == (0, -1)


def test_witness_recheck_independent_bfs():
    # re-verify the distance witness by a from-scratch single-source sweep
    g = gen_gnp(60, 0.05, 3)
    s = [0]
    v = is_beta_ruling_set(g, s, 1)
    if not v.ok:
        vertex, dist = v.witness
        ref = kernels.bfs_distances(g.indptr, g.indices, np.array([0]))
        assert int(ref[vertex]) == dist
        assert dist > 1 or dist == -1


def test_brute_force_k2_and_c5():
    k2 = from_edges(2, [0], [1])
    sets = sorted(tuple(s.tolist()) for s in brute_force_all_mis(k2))
    assert sets == [(0,), (1,)]
    c5 = from_edges(5, [0, 1, 2, 3, 4], [1, 2, 3, 4, 0])
    sets5 = brute_force_all_mis(c5)
    assert len(sets5) == 5 and all(len(s) == 2 for s in sets5)


def test_brute_force_gadget_every_mis_is_1_ruling():
    g = gen_gadget(2134567, 3214567)
    sets = brute_force_all_mis(g)
    assert sets
    for s in sets:
        assert is_beta_ruling_set(g, s, 1).ok
    # no enumerated set strictly contains another
    as_sets = [frozenset(s.tolist()) for s in sets]
    for a in as_sets:
        for b in as_sets:
            assert a == b or not a < b


def test_brute_force_rejects_large():
    with pytest.raises(ValueError):
        brute_force_all_mis(gen_gnp(21, 0.1, 0))


def test_cross_module_mis_oracle():
    for seed in range(20):
        g = gen_gnp(120, 0.05, seed)
        out = beeping_mis(g, seed)
        assert is_beta_ruling_set(g, out, 1).ok

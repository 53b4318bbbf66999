import numpy as np
import pytest

from symbreak.graph import (
    Graph,
    GraphError,
    from_edges,
    gen_gadget,
    gen_gnp,
    gen_lower_bound_graph,
    induced_subgraph,
    is_valid_vector,
    load_edge_list,
    parse_vector,
    save_edge_list,
    valid_vectors,
)


def check_invariants(g: Graph):
    g.validate()
    assert g.m * 2 == int(g.degrees.sum())
    assert g.max_degree == (int(g.degrees.max()) if g.n else 0)


def test_gnp_trivial_cases():
    assert gen_gnp(0, 0.5, 1).m == 0
    assert gen_gnp(5, 1.0, 1).m == 10
    assert gen_gnp(5, 0.0, 1).m == 0


def test_gnp_edge_count_concentration():
    # Binomial(4950, 0.1): mean 495, sd 21.1; [350, 650] is a +-6.9 sd window
    g = gen_gnp(100, 0.1, 42)
    assert 350 <= g.m <= 650
    check_invariants(g)


def test_gnp_deterministic_per_seed():
    a = gen_gnp(80, 0.1, 7)
    b = gen_gnp(80, 0.1, 7)
    c = gen_gnp(80, 0.1, 8)
    assert np.array_equal(a.indices, b.indices) and np.array_equal(a.indptr, b.indptr)
    assert not np.array_equal(a.indices, c.indices)


def test_gnp_rejects_bad_p():
    with pytest.raises(GraphError):
        gen_gnp(10, 1.5, 0)


def test_valid_vectors_count_and_membership():
    vv = valid_vectors()
    assert len(vv) == 21
    assert len(set(vv)) == 21
    assert vv == sorted(vv)
    assert parse_vector(2134567) in vv
    assert parse_vector(1234567) not in vv
    for v in vv:
        assert is_valid_vector(v)


def test_invalid_vectors():
    assert not is_valid_vector(1234567)   # zero swapped positions
    assert not is_valid_vector(2314567)   # 3-cycle, not a transposition
    assert not is_valid_vector(2134576)   # two separate swaps
    assert not is_valid_vector("1234568")  # digit out of range


def test_gadget_matches_figure():
    g = gen_gadget(2134567, 3214567)
    assert g.n == 14 and g.m == 9
    us, vs = g.edge_array()
    edges = set(zip(us.tolist(), vs.tolist()))
    for i in range(7):
        assert (i, i + 7) in edges
    assert (0, 1) in edges   # special u-edge from X = 2134567
    assert (7, 9) in edges   # special v-edge from Y = 3214567
    assert g.max_degree == 2
    check_invariants(g)


def test_gadget_shape_for_all_vector_pairs():
    vv = valid_vectors()
    for x in vv[::5]:
        for y in vv[::7]:
            g = gen_gadget(x, y)
            assert g.n == 14 and g.m == 9 and g.max_degree == 2


def test_gadget_rejects_invalid_vector():
    with pytest.raises(GraphError):
        gen_gadget(1234567, 2134567)


def test_lower_bound_graph_small():
    g = gen_lower_bound_graph(28, 3)
    assert g.n == 28 and g.m == 18
    check_invariants(g)
    one = gen_lower_bound_graph(14, 3)
    assert one.n == 14 and one.m == 9 and one.max_degree == 2


def test_lower_bound_graph_components_are_gadgets():
    from symbreak import kernels

    g = gen_lower_bound_graph(14 * 6, 9)
    for i in range(6):
        block = np.arange(14 * i, 14 * (i + 1))
        dist = kernels.bfs_distances(g.indptr, g.indices, block)
        reached = np.flatnonzero(dist >= 0)
        assert np.array_equal(reached, block)  # component = the block
        sub, _ = induced_subgraph(g, block)
        assert sub.m == 9


def test_lower_bound_graph_rejects_bad_n():
    with pytest.raises(GraphError):
        gen_lower_bound_graph(20, 0)


def test_edge_list_roundtrip(tmp_path):
    g = gen_gnp(60, 0.1, 5)
    path = tmp_path / "g.edges"
    save_edge_list(g, path)
    h = load_edge_list(path)
    assert h.n == g.n
    assert np.array_equal(h.indptr, g.indptr)
    assert np.array_equal(h.indices, g.indices)


def test_edge_list_dedup_and_header(tmp_path):
    path = tmp_path / "p.edges"
    path.write_text("# n=3\n0 1\n0 1\n1 2\n")
    g = load_edge_list(path)
    assert g.n == 3 and g.m == 2  # duplicate line collapses


def test_edge_list_symmetrizes(tmp_path):
    path = tmp_path / "s.edges"
    path.write_text("1 0\n")
    g = load_edge_list(path)
    assert g.has_edge(0, 1) and g.has_edge(1, 0)


@pytest.mark.parametrize(
    "content",
    ["0 1 2\n", "a b\n", "0 0\n", "# n=2\n0 5\n"],
)
def test_edge_list_rejects_malformed(tmp_path, content):
    path = tmp_path / "bad.edges"
    path.write_text(content)
    with pytest.raises(GraphError):
        load_edge_list(path)


def test_from_edges_rejects_self_loop():
    with pytest.raises(GraphError):
        from_edges(3, [0], [0])


def test_generated_graphs_pass_invariants():
    for seed in range(5):
        check_invariants(gen_gnp(70, 0.15, seed))
        check_invariants(gen_lower_bound_graph(14 * 3, seed))


def test_induced_subgraph():
    g = from_edges(6, [0, 1, 2, 3], [1, 2, 3, 4])
    sub, ids = induced_subgraph(g, [1, 2, 4, 5])
    assert sub.n == 4
    assert np.array_equal(ids, [1, 2, 4, 5])
    su, sv = sub.edge_array()
    assert list(zip(su.tolist(), sv.tolist())) == [(0, 1)]  # only edge (1,2) survives

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from inducedpath.graph_core import (GnpParams, Graph, GraphError, complete_graph, cycle_graph,
                                    induced_subgraph, is_independent_set, is_induced_copy, is_induced_path,
                                    parse_edge_list, path_graph, read_edge_list, sample_gnp,
                                    sample_gnp_adjacency, split_vertices, write_edge_list)
from inducedpath.rng import make_rng


@st.composite
def small_graphs(draw, max_n=10):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


def triangle():
    return complete_graph(3)


# sampling

def test_p_zero_gives_empty_graph():
    for seed in range(5):
        assert sample_gnp(GnpParams(5, 0.0), seed).edge_count == 0


def test_p_one_gives_complete_graph():
    g = sample_gnp(GnpParams(5, 1.0), 7)
    assert g.edge_count == 10


def test_params_derived_values():
    p = GnpParams.from_degree(1000, 20)
    assert p.p == pytest.approx(0.02)
    assert p.d == pytest.approx(20)
    assert GnpParams(10, 0.5).q == pytest.approx(2.0)
    with pytest.raises(ZeroDivisionError):
        GnpParams(10, 1.0).q
    with pytest.raises(ValueError):
        GnpParams(10, 1.5)


def test_mean_edge_count_and_per_pair_frequency():
    n, p, trials = 100, 0.1, 10_000
    params = GnpParams(n, p)
    counts = np.zeros((n, n))
    totals = np.empty(trials)
    for s in range(trials):
        e = sample_gnp(params, s).edges()
        counts[e[:, 0], e[:, 1]] += 1
        totals[s] = len(e)
    se = totals.std(ddof=1) / np.sqrt(trials)
    assert abs(totals.mean() - 495) < 3 * se
    freq = counts[np.triu_indices(n, 1)] / trials
    assert np.all(np.abs(freq - p) < 4 * np.sqrt(p * (1 - p) / trials))


def test_sparse_branch_edge_count():
    # p < 0.01 takes the geometric skipping path
    n, p, trials = 400, 0.005, 2000
    totals = np.array([sample_gnp(GnpParams(n, p), s).edge_count for s in range(trials)])
    mean = n * (n - 1) / 2 * p
    assert abs(totals.mean() - mean) < 3 * totals.std(ddof=1) / np.sqrt(trials)


def test_seed_determinism():
    a = sample_gnp(GnpParams.from_degree(5000, 8), 123)
    b = sample_gnp(GnpParams.from_degree(5000, 8), 123)
    c = sample_gnp(GnpParams.from_degree(5000, 8), 124)
    assert np.array_equal(a.indptr, b.indptr) and np.array_equal(a.indices, b.indices)
    assert not np.array_equal(a.indices, c.indices)


def test_sample_is_valid_graph():
    for n, d in [(2, 1.0), (50, 49.0), (3000, 5.0), (3000, 60.0)]:
        sample_gnp(GnpParams.from_degree(n, d), 3).validate()


def test_batch_adjacency_sampler_is_symmetric():
    adj = sample_gnp_adjacency(8, 0.3, 50, make_rng(0))
    assert adj.shape == (50, 8, 8)
    assert np.array_equal(adj, adj.transpose(0, 2, 1))
    assert not adj[:, np.arange(8), np.arange(8)].any()


# construction and validation

def test_from_edges_rejects_bad_input():
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 3)])


@given(small_graphs())
def test_constructed_graphs_validate(g):
    g.validate()
    for u, v in g.edges().tolist():
        assert g.has_edge(u, v) and g.has_edge(v, u)
    assert np.array_equal(Graph.from_adjacency(g.adjacency_matrix()).indices, g.indices)


# induced subgraphs

def test_induced_subgraph_examples():
    sub, labels = induced_subgraph(triangle(), {0, 1})
    assert sub.n == 2 and sub.edge_count == 1
    sub, labels = induced_subgraph(cycle_graph(5), [])
    assert sub.n == 0
    sub, labels = induced_subgraph(cycle_graph(5), [1, 2, 3, 4])
    assert sub.edge_count == 3 and sub.max_degree() == 2
    assert is_induced_path(sub, [0, 1, 2, 3])


def test_induced_copy_examples():
    assert not is_induced_copy(triangle(), path_graph(3), [0, 1, 2])
    assert not is_induced_copy(triangle(), path_graph(3), [2, 0, 1])
    assert is_induced_copy(path_graph(3), path_graph(3), [0, 1, 2])
    assert is_induced_copy(cycle_graph(5), path_graph(4), [0, 1, 2, 3])
    with pytest.raises(ValueError):
        is_induced_copy(cycle_graph(5), path_graph(3), [0, 0, 1])


@given(small_graphs(8), st.data())
def test_induced_copy_composes_with_induced_subgraph(g, data):
    k = data.draw(st.integers(0, g.n))
    image = data.draw(st.permutations(range(g.n)))[:k]
    pattern = data.draw(small_graphs(k).filter(lambda h: h.n == k)) if k else Graph.empty(0)
    sub, labels = induced_subgraph(g, image)
    relabel = [int(np.searchsorted(labels, v)) for v in image]
    assert is_induced_copy(g, pattern, image) == is_induced_copy(sub, pattern, relabel)


def test_independent_set_examples():
    assert is_independent_set(cycle_graph(5), [])
    assert not is_independent_set(Graph.from_edges(2, [(0, 1)]), [0, 1])
    assert is_independent_set(cycle_graph(5), [0, 2])


@given(small_graphs())
def test_independent_set_matches_pair_scan(g):
    members = [v for v in range(g.n) if v % 2 == 0]
    expect = not any(g.has_edge(u, v) for u in members for v in members if u < v)
    assert is_independent_set(g, members) == expect


# splits

def test_split_sizes():
    s = split_vertices(2, 0)
    assert len(s.part_one) == 1 and len(s.part_two) == 1
    s = split_vertices(7, 0)
    assert (len(s.part_one), len(s.part_two)) == (4, 3)


def test_split_seeds_differ_and_balance():
    a, b = split_vertices(10_000, 1), split_vertices(10_000, 2)
    for s in (a, b):
        assert len(s.part_one) == 5000 == len(s.part_two)
        assert sorted(np.concatenate([s.part_one, s.part_two]).tolist()) == list(range(10_000))
    assert set(a.part_one.tolist()) != set(b.part_one.tolist())


# induced paths

def test_induced_path_examples():
    c5 = cycle_graph(5)
    assert is_induced_path(c5, [0, 1, 2, 3])
    assert not is_induced_path(c5, [0, 1, 2, 3, 4])
    assert not is_induced_path(triangle(), [0, 1, 2])
    assert is_induced_path(c5, [])
    assert is_induced_path(c5, [3])
    assert not is_induced_path(c5, [0, 2])
    assert not is_induced_path(c5, [0, 1, 0])


@given(small_graphs(9), st.data())
def test_induced_path_matches_matrix_check(g, data):
    seq = data.draw(st.lists(st.integers(0, max(g.n - 1, 0)), max_size=g.n, unique=True)) if g.n else []
    a = g.adjacency_matrix()
    expect = all(a[u, v] == (abs(i - j) == 1) for i, u in enumerate(seq) for j, v in enumerate(seq) if i != j)
    assert is_induced_path(g, seq) == expect


# edge list io

def test_edge_list_roundtrip(tmp_path):
    g = sample_gnp(GnpParams(30, 0.2), 5)
    write_edge_list(g, tmp_path / "g.txt")
    h = read_edge_list(tmp_path / "g.txt")
    assert h.n == g.n and np.array_equal(h.edges(), g.edges())


def test_edge_list_rejects_bad_header():
    with pytest.raises(GraphError):
        parse_edge_list(["3 2", "0 1"])
    with pytest.raises(GraphError):
        parse_edge_list([])

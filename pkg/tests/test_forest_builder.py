import math

import pytest

from inducedpath.forest_builder import (HEAD, TAIL, LinearForest, build_induced_linear_forest, segment,
                                        verify_induced_forest)
from inducedpath.graph_core import GnpParams, Graph, path_graph, sample_gnp

# frozen on the first blessed run: G(2000, 0.01), seed 7, L = 4, one restart
FIXTURE_ORDER = 280


def two_p5():
    return Graph.from_edges(10, [(i, i + 1) for i in range(4)] + [(i, i + 1) for i in range(5, 9)])


def test_empty_graph_gives_empty_forest():
    f = build_induced_linear_forest(Graph.empty(20), None, 2)
    assert f.order == 0 and len(f) == 0
    assert verify_induced_forest(Graph.empty(20), f)


def test_two_paths_recovered():
    g = two_p5()
    for seed in range(20):
        f = build_induced_linear_forest(g, None, 5, seed=seed)
        assert sorted(sorted(c) for c in f.components) == [[0, 1, 2, 3, 4], [5, 6, 7, 8, 9]]
        assert verify_induced_forest(g, f, 5)


def test_allowed_set_is_respected():
    g = two_p5()
    f = build_induced_linear_forest(g, range(5), 5)
    assert f.components == ((0, 1, 2, 3, 4),) or f.components == ((4, 3, 2, 1, 0),)
    with pytest.raises(ValueError):
        build_induced_linear_forest(g, [10], 3)


def test_bad_arguments():
    with pytest.raises(ValueError):
        build_induced_linear_forest(two_p5(), None, 1)
    with pytest.raises(ValueError):
        build_induced_linear_forest(two_p5(), None, 3, max_rounds=0)


def test_regression_fixture():
    g = sample_gnp(GnpParams(2000, 0.01), 7)
    f = build_induced_linear_forest(g, None, 4, seed=7)
    assert abs(f.order - FIXTURE_ORDER) <= 0.05 * FIXTURE_ORDER
    assert verify_induced_forest(g, f, 4)
    assert f.normalized_order(0.01) == pytest.approx(f.order * 0.01 / math.log(20))


def test_more_rounds_never_hurt():
    g = sample_gnp(GnpParams(2000, 0.01), 7)
    orders = [build_induced_linear_forest(g, None, 4, r, seed=7).order for r in range(1, 7)]
    assert orders == sorted(orders)
    f = build_induced_linear_forest(g, None, 4, 6, seed=7)
    assert f.order == max(f.restart_orders)
    assert f.restart_orders.index(f.order) == min(i for i, o in enumerate(f.restart_orders) if o == f.order)


def test_builder_is_deterministic():
    g = sample_gnp(GnpParams.from_degree(1000, 10), 1)
    assert build_induced_linear_forest(g, None, 4, 2, 5) == build_induced_linear_forest(g, None, 4, 2, 5)


@pytest.mark.slow
@pytest.mark.parametrize("n", [500, 2000])
@pytest.mark.parametrize("d", [8, 16, 32])
@pytest.mark.parametrize("L", [3, 4, 6])
def test_fuzz_grid_certifies(n, d, L):
    for s in range(100):
        g = sample_gnp(GnpParams.from_degree(n, d), s)
        f = build_induced_linear_forest(g, None, L, seed=s)
        assert verify_induced_forest(g, f, L), (n, d, L, s)


# segments

def test_segments():
    comp = ("a", "b", "c", "d", "e")
    assert segment(comp, HEAD, 2) == ("a", "b")
    assert segment(comp, TAIL, 2) == ("d", "e")
    assert not set(segment(comp, HEAD, 2)) & set(segment(comp, TAIL, 2))
    with pytest.raises(ValueError):
        segment(comp, HEAD, 3)
    with pytest.raises(ValueError):
        segment(comp, "middle", 1)
    with pytest.raises(ValueError):
        segment(comp[:4], TAIL, 2)


# verification

def test_verify_rejects_cross_edge():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5), (2, 3)])
    f = LinearForest(((0, 1, 2), (3, 4, 5)))
    assert not verify_induced_forest(g, f)


def test_verify_rejects_chord():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 2)])
    assert not verify_induced_forest(g, LinearForest(((0, 1, 2, 3),)))
    assert verify_induced_forest(path_graph(4), LinearForest(((0, 1, 2, 3),)))


def test_verify_rejects_malformed_forests():
    g = path_graph(4)
    assert not verify_induced_forest(g, LinearForest(((0, 2),)))
    assert not verify_induced_forest(g, LinearForest(((0, 1), (1, 2))))
    assert not verify_induced_forest(g, LinearForest(((0, 1, 2, 3),)), L=3)
    assert not verify_induced_forest(g, LinearForest(((0, 9),)))

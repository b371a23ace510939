import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geogroup.clustering import (
    ClusterSpec,
    DiscountWeights,
    clustering_suitability,
    dynamic_clustering,
    linear_weights,
    pairing_suitability,
)
from geogroup.graph import UndirectedGraph
from helpers import static_deployment, trace_deployment


def spec(T=3, **kw):
    kw.setdefault("center", (50.0, 50.0))
    kw.setdefault("d_max", 100.0)
    kw.setdefault("d_min", 10.0)
    return ClusterSpec(weights=linear_weights(T), **kw)


def test_linear_weights():
    assert list(linear_weights(1).weights) == [1.0]
    assert linear_weights(3).weights == pytest.approx([1 / 6, 2 / 6, 3 / 6])
    with pytest.raises(ValueError):
        linear_weights(0)


@given(st.integers(1, 500))
def test_linear_weights_sum_and_monotone(T):
    w = linear_weights(T).weights
    assert abs(w.sum() - 1) <= 1e-12
    assert np.all(np.diff(w) >= 0)


def test_weight_validation():
    with pytest.raises(ValueError):
        DiscountWeights([0.6, 0.4])
    with pytest.raises(ValueError):
        DiscountWeights([0.5, 0.4])
    with pytest.raises(ValueError):
        DiscountWeights([-0.5, 1.5])


def test_spec_validation():
    with pytest.raises(ValueError):
        spec(xi_cs=0.0)
    with pytest.raises(ValueError):
        spec(xi_ps=1.2)
    with pytest.raises(ValueError):
        spec(d_min=120.0)


def test_cs_examples():
    inside = np.array([[50, 50]] * 3)
    outside = np.array([[0, 0]] * 3)
    assert clustering_suitability(inside, spec()) == 1.0
    assert clustering_suitability(outside, spec()) == 0.0
    late = np.array([[0, 0], [55, 50], [50, 50]])
    assert clustering_suitability(late, spec()) == pytest.approx(5 / 6)
    # rim counts as inside
    assert clustering_suitability(np.array([[100, 50]] * 3), spec()) == 1.0
    with pytest.raises(ValueError):
        clustering_suitability(inside[:2], spec())


def test_ps_examples():
    a = np.array([[10, 10]] * 3)
    assert pairing_suitability(a, a + [20, 0], spec()) == 1.0
    assert pairing_suitability(a, a, spec()) == 0.0
    b = np.array([[10, 10], [10, 10], [40, 10]])
    assert pairing_suitability(a, b, spec()) == pytest.approx(0.5)
    # exactly d_min apart is not "farther"
    assert pairing_suitability(a, a + [10, 0], spec()) == 0.0
    with pytest.raises(ValueError):
        pairing_suitability(a, b[:2], spec())


def test_dc_all_static_at_center():
    dep = static_deployment([(50, 50)] * 4)
    res = dynamic_clustering(dep, ClusterSpec.for_deployment(dep))
    assert res.suitable_ids == (0, 1, 2, 3)
    assert res.graph.edges == frozenset()


def test_dc_center_and_rim():
    dep = static_deployment([(50, 50), (99, 50)])
    res = dynamic_clustering(dep, ClusterSpec.for_deployment(dep))
    assert res.suitable_ids == (0, 1)
    assert res.graph.edges == {(0, 1)}


def test_dc_insufficient():
    dep = static_deployment([(50, 50), (0, 0), (100, 100)])
    with pytest.raises(ValueError, match="insufficient suitable nodes"):
        dynamic_clustering(dep, ClusterSpec.for_deployment(dep))


def brute_dc(paths, center, d_max, d_min, xi_cs, xi_ps):
    """Loop-level recomputation of the clustering rule."""
    T = len(paths[0])
    w = [t / (T * (T + 1) / 2) for t in range(1, T + 1)]
    cs = []
    for p in paths:
        cs.append(sum(wt for wt, (x, y) in zip(w, p) if math.hypot(x - center[0], y - center[1]) <= d_max / 2))
    keep = [i for i, c in enumerate(cs) if c >= xi_cs]
    edges = set()
    for gi, gj in itertools.combinations(range(len(keep)), 2):
        pi, pj = paths[keep[gi]], paths[keep[gj]]
        ps = sum(wt for wt, a, b in zip(w, pi, pj) if math.dist(a, b) > d_min)
        if ps >= xi_ps:
            edges.add((gi, gj))
    return keep, edges, cs


HAND_PATHS = [
    [(50, 50), (52, 50), (54, 50)],
    [(60, 50), (70, 50), (80, 50)],
    [(5, 5), (40, 40), (50, 55)],  # CS = 5/6
    [(0, 0), (0, 0), (60, 60)],    # CS = 1/2, rejected
    [(51, 51), (62, 50), (70, 52)],
]


def test_dc_hand_built_matches_brute_force():
    dep = trace_deployment(HAND_PATHS)
    res = dynamic_clustering(dep, ClusterSpec.for_deployment(dep))
    keep, edges, cs = brute_dc(HAND_PATHS, (50, 50), 100, 10, 0.7, 0.7)
    assert list(res.suitable_ids) == keep == [0, 1, 2, 4]
    assert res.graph.edges == edges
    assert res.rejected == {3: pytest.approx(0.5)}
    for i, c in enumerate(cs):
        assert res.cs_values[i] == pytest.approx(c)


paths_strategy = st.lists(
    st.lists(st.tuples(st.floats(0, 100), st.floats(0, 100)), min_size=4, max_size=4),
    min_size=2, max_size=9,
)


@settings(max_examples=60, deadline=None)
@given(paths_strategy, st.floats(0.05, 1.0), st.floats(0.05, 1.0))
def test_dc_matches_brute_force(paths, xi_cs, xi_ps):
    dep = trace_deployment(paths)
    keep, edges, _ = brute_dc(paths, (50, 50), 100, 10, xi_cs, xi_ps)
    sp = ClusterSpec.for_deployment(dep, xi_cs, xi_ps)
    if len(keep) < 2:
        with pytest.raises(ValueError):
            dynamic_clustering(dep, sp)
        return
    res = dynamic_clustering(dep, sp)
    assert list(res.suitable_ids) == keep
    assert res.graph.edges == edges
    assert np.all((res.ps_values >= 0) & (res.ps_values <= 1 + 1e-12))
    assert all(0 <= c <= 1 + 1e-12 for c in res.cs_values.values())


@settings(max_examples=40, deadline=None)
@given(paths_strategy, st.randoms(use_true_random=False))
def test_dc_relabeling_invariance(paths, rnd):
    perm = list(range(len(paths)))
    rnd.shuffle(perm)
    a_dep = trace_deployment(paths)
    b_dep = trace_deployment([paths[i] for i in perm])
    try:
        a = dynamic_clustering(a_dep, ClusterSpec.for_deployment(a_dep))
    except ValueError:
        with pytest.raises(ValueError):
            dynamic_clustering(b_dep, ClusterSpec.for_deployment(b_dep))
        return
    b = dynamic_clustering(b_dep, ClusterSpec.for_deployment(b_dep))
    # map b's graph back to original node ids and compare edge sets
    ea = {frozenset((a.suitable_ids[x], a.suitable_ids[y])) for x, y in a.graph.edges}
    eb = {frozenset((perm[b.suitable_ids[x]], perm[b.suitable_ids[y]])) for x, y in b.graph.edges}
    assert ea == eb
    assert sorted(a.suitable_ids) == sorted(perm[i] for i in b.suitable_ids)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 100), st.floats(0, 100)), min_size=2, max_size=10))
def test_static_indicators_are_binary(points):
    dep = static_deployment(points, T=4)
    sp = ClusterSpec.for_deployment(dep, 0.05, 0.05)
    try:
        res = dynamic_clustering(dep, sp)
    except ValueError:
        return
    assert set(res.cs_values.values()) <= {0.0, 1.0}
    assert np.all(np.isclose(res.ps_values, 0) | np.isclose(res.ps_values, 1))


@settings(max_examples=30, deadline=None)
@given(paths_strategy, st.floats(0.05, 0.5), st.floats(0.05, 0.45))
def test_threshold_monotonicity(paths, xi, bump):
    dep = trace_deployment(paths)
    try:
        lo = dynamic_clustering(dep, ClusterSpec.for_deployment(dep, xi, xi))
    except ValueError:
        return
    try:
        hi_nodes = dynamic_clustering(dep, ClusterSpec.for_deployment(dep, xi + bump, xi))
        assert set(hi_nodes.suitable_ids) <= set(lo.suitable_ids)
    except ValueError:
        pass
    hi_edges = dynamic_clustering(dep, ClusterSpec.for_deployment(dep, xi, xi + bump))
    assert hi_edges.graph.edges <= lo.graph.edges


def test_graph_indexing_matches_ps_matrix():
    dep = trace_deployment(HAND_PATHS)
    res = dynamic_clustering(dep, ClusterSpec.for_deployment(dep))
    m = res.ps_values
    for a, b in itertools.combinations(range(res.graph.n), 2):
        assert res.graph.has_edge(a, b) == (m[a, b] >= 0.7)
    assert isinstance(res.graph, UndirectedGraph)

"""Small shared builders and brute-force oracles for the test suite."""

import itertools

import numpy as np

from geogroup.graph import UndirectedGraph
from geogroup.mobility import Deployment, NodeTrace, preset_scenario


def static_deployment(points, T=3, side=100.0, d_min=10.0, d_max=100.0):
    sc = preset_scenario("dense", side_length=side, d_min=d_min, d_max=d_max, history_len_T=T)
    traces = tuple(NodeTrace(i, np.tile(np.asarray(p, float), (T, 1))) for i, p in enumerate(points))
    return Deployment(sc, traces, 0)


def trace_deployment(paths, side=100.0, d_min=10.0, d_max=100.0):
    """paths: list of (T, 2) arrays."""
    T = len(paths[0])
    sc = preset_scenario("dense", side_length=side, d_min=d_min, d_max=d_max, history_len_T=T)
    traces = tuple(NodeTrace(i, np.asarray(p, float)) for i, p in enumerate(paths))
    return Deployment(sc, traces, 0)


def chromatic_number(g: UndirectedGraph) -> int:
    """Exhaustive search; fine for n <= 8."""
    if g.n == 0:
        return 0
    for k in range(1, g.n + 1):
        for colors in itertools.product(range(k), repeat=g.n):
            if colors[0] != 0:
                continue
            if all(colors[a] != colors[b] for a, b in g.edges):
                return k
    return g.n


def random_graph(rnd, n, p):
    edges = [(a, b) for a, b in itertools.combinations(range(n), 2) if rnd.random() < p]
    return UndirectedGraph(n, edges)

"""Immutable undirected simple graphs over dense integer node ids."""

from __future__ import annotations

from typing import Iterable

import numpy as np


class UndirectedGraph:
    """Simple undirected graph on nodes ``0..n-1``.

    Edges are stored as a frozenset of ``(a, b)`` pairs with ``a < b``; an
    adjacency-list view is derived once at construction and never mutated.
    Callers that need other identifiers keep their own mapping.
    """

    __slots__ = ("_n", "_edges", "_adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("node count must be nonnegative")
        self._n = int(n)
        pairs = set()
        for a, b in edges:
            pairs.add(self._normalize(a, b))
        self._edges = frozenset(pairs)
        adj: list[list[int]] = [[] for _ in range(self._n)]
        for a, b in self._edges:
            adj[a].append(b)
            adj[b].append(a)
        self._adj = tuple(tuple(sorted(nbrs)) for nbrs in adj)

    def _normalize(self, a: int, b: int) -> tuple[int, int]:
        a, b = int(a), int(b)
        if a == b:
            raise ValueError(f"self-loop on node {a} is not an edge")
        for v in (a, b):
            if not 0 <= v < self._n:
                raise KeyError(f"unknown node id {v}")
        return (a, b) if a < b else (b, a)

    @classmethod
    def from_adjacency_matrix(cls, matrix) -> "UndirectedGraph":
        m = np.asarray(matrix, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("adjacency matrix must be square")
        rows, cols = np.nonzero(np.triu(m, k=1))
        return cls(m.shape[0], zip(rows.tolist(), cols.tolist()))

    @classmethod
    def complete(cls, n: int) -> "UndirectedGraph":
        return cls(n, ((a, b) for a in range(n) for b in range(a + 1, n)))

    @classmethod
    def cycle(cls, n: int) -> "UndirectedGraph":
        return cls(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def path(cls, n: int) -> "UndirectedGraph":
        return cls(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def complete_bipartite(cls, p: int, q: int) -> "UndirectedGraph":
        return cls(p + q, ((a, p + b) for a in range(p) for b in range(q)))

    @property
    def n(self) -> int:
        return self._n

    @property
    def node_ids(self) -> range:
        return range(self._n)

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return self._edges

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._adj

    def neighbors(self, a: int) -> tuple[int, ...]:
        self._check_node(a)
        return self._adj[a]

    def has_edge(self, a: int, b: int) -> bool:
        if a == b:
            return False
        return ((a, b) if a < b else (b, a)) in self._edges

    def _check_node(self, a: int) -> None:
        if not 0 <= a < self._n:
            raise KeyError(f"unknown node id {a}")

    def adjacency_matrix(self) -> np.ndarray:
        m = np.zeros((self._n, self._n), dtype=bool)
        if self._edges:
            idx = np.array(sorted(self._edges))
            m[idx[:, 0], idx[:, 1]] = True
            m[idx[:, 1], idx[:, 0]] = True
        return m

    def __len__(self) -> int:
        return self._n

    def __eq__(self, other) -> bool:
        if not isinstance(other, UndirectedGraph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"UndirectedGraph(n={self._n}, edges={len(self._edges)})"


def add_edge(g: UndirectedGraph, a: int, b: int) -> UndirectedGraph:
    """Return a copy of ``g`` with edge ``{a, b}``; repeating an edge is a no-op."""
    pair = g._normalize(a, b)
    if pair in g.edges:
        return g
    return UndirectedGraph(g.n, g.edges | {pair})


def complement(g: UndirectedGraph) -> UndirectedGraph:
    m = ~g.adjacency_matrix()
    np.fill_diagonal(m, False)
    return UndirectedGraph.from_adjacency_matrix(m)


def density(g: UndirectedGraph) -> float:
    if g.n < 2:
        raise ValueError("density is undefined for fewer than two nodes")
    return len(g.edges) / (g.n * (g.n - 1) / 2)


def degree(g: UndirectedGraph, a: int) -> int:
    return len(g.neighbors(a))


def to_edge_list(g: UndirectedGraph) -> str:
    """Render edges as ``a b`` lines, ascending within and across pairs."""
    return "".join(f"{a} {b}\n" for a, b in sorted(g.edges))


def from_edge_list(text: str, n: int) -> UndirectedGraph:
    pairs = []
    for line in text.splitlines():
        line = line.strip()
        if line:
            a, b = line.split()
            pairs.append((int(a), int(b)))
    return UndirectedGraph(n, pairs)

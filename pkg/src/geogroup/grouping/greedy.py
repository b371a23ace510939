"""Constructive colorings: first-fit, DSatur, and Equitable Largest-degree First."""

from __future__ import annotations

import heapq
import random
from typing import Sequence

from ..graph import UndirectedGraph
from .solution import GroupingSolution, joint_cost


def greedy_color(g: UndirectedGraph, k: int, order: Sequence[int]) -> GroupingSolution:
    """First-fit into sets ``0..k-1`` in the given order; nodes that fit nowhere go ungrouped."""
    if sorted(order) != list(range(g.n)):
        raise ValueError("order must be a permutation of the graph's nodes")
    adj = g.adjacency
    color = [k] * g.n
    for v in order:
        taken = {color[y] for y in adj[v]}
        for j in range(k):
            if j not in taken:
                color[v] = j
                break
    return GroupingSolution.from_colors(color, k)


def random_greedy(g: UndirectedGraph, k: int, rng: random.Random) -> GroupingSolution:
    order = list(range(g.n))
    rng.shuffle(order)
    return greedy_color(g, k, order)


def dsatur(g: UndirectedGraph) -> tuple[int, GroupingSolution]:
    """Brelaz's DSatur: always color the most saturated node next.

    Ties prefer the higher (static) degree, then the lower id. Returns the
    number of colors used and the complete proper coloring.
    """
    n = g.n
    if n == 0:
        raise ValueError("dsatur needs a nonempty graph")
    adj = g.adjacency
    deg = [len(a) for a in adj]
    color = [-1] * n
    seen: list[set[int]] = [set() for _ in range(n)]
    heap = [(0, -deg[v], v) for v in range(n)]
    heapq.heapify(heap)
    k = 0
    while heap:
        neg_sat, _, v = heapq.heappop(heap)
        if color[v] >= 0 or -neg_sat != len(seen[v]):
            continue  # stale entry
        c = 0
        while c in seen[v]:
            c += 1
        color[v] = c
        k = max(k, c + 1)
        for y in adj[v]:
            if color[y] < 0 and c not in seen[y]:
                seen[y].add(c)
                heapq.heappush(heap, (-len(seen[y]), -deg[y], y))
    return k, GroupingSolution.from_colors(color, k)


def elf_order(g: UndirectedGraph) -> list[int]:
    adj = g.adjacency
    return sorted(range(g.n), key=lambda v: (-len(adj[v]), v))


def elf_greedy(g: UndirectedGraph, k: int, alpha: float = 0.5,
               variance: str = "population") -> tuple[GroupingSolution, float]:
    """Largest-degree-first order, each node into the smallest set it fits.

    Size ties go to the lower set index; nodes with no proper set are left
    ungrouped. Returns the solution and its joint cost.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    adj = g.adjacency
    color = [k] * g.n
    sizes = [0] * k
    for v in elf_order(g):
        taken = {color[y] for y in adj[v]}
        best = -1
        for j in range(k):
            if j not in taken and (best < 0 or sizes[j] < sizes[best]):
                best = j
        if best >= 0:
            color[v] = best
            sizes[best] += 1
    s = GroupingSolution.from_colors(color, k)
    return s, joint_cost(s, alpha, variance)

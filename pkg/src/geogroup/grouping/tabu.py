"""Tabu search over partial colorings {S_1..S_k, U}.

The search state keeps, for every node, how many of its neighbours sit in
each color set, plus integer size totals, so that the cost of a candidate
placement is O(1) and applying a move is O(degree of the moved nodes).
"""

from __future__ import annotations

import random
from collections import deque
from typing import NamedTuple

from ..graph import UndirectedGraph
from .solution import CostParams, GroupingSolution, _variance, is_proper, joint_cost


class RevesMonitor:
    """Plateau detector over a stream of costs.

    Keeps the last ``ws`` costs; once the window is full, counts consecutive
    updates where both the window minimum and maximum are unchanged, and
    signals a stop when that count reaches ``p``.
    """

    def __init__(self, ws: int = 150, p: int = 70):
        if ws < 1 or p < 1:
            raise ValueError("ws and p must be at least 1")
        self.ws = ws
        self.p = p
        self._window: deque[float] = deque(maxlen=ws)
        self._last: tuple[float, float] | None = None
        self._stable = 0
        self.updates = 0

    def update(self, cost: float) -> bool:
        self.updates += 1
        self._window.append(cost)
        if len(self._window) < self.ws:
            return False
        span = (min(self._window), max(self._window))
        if span == self._last:
            self._stable += 1
        else:
            self._stable = 0
            self._last = span
        return self._stable >= self.p


def reves_stop_index(costs, ws: int = 150, p: int = 70) -> int | None:
    """1-based position at which a :class:`RevesMonitor` fed ``costs`` stops, if ever."""
    mon = RevesMonitor(ws, p)
    for i, c in enumerate(costs, 1):
        if mon.update(c):
            return i
    return None


class _SearchState:
    """Mutable partial coloring; color ``k`` is the ungrouped set."""

    def __init__(self, g: UndirectedGraph, colors: list[int], k: int, alpha: float, variance: str):
        self.g = g
        self.adj = g.adjacency
        self.k = k
        self.alpha = alpha
        self.variance = variance
        n = g.n
        self.color = list(colors)
        self.buckets: list[list[int]] = [[] for _ in range(k + 1)]
        self.slot = [0] * n
        self.cnt = [[0] * (k + 1) for _ in range(n)]
        for v, c in enumerate(self.color):
            self.slot[v] = len(self.buckets[c])
            self.buckets[c].append(v)
        for v in range(n):
            row = self.cnt[v]
            for y in self.adj[v]:
                row[self.color[y]] += 1
        self.total = n - len(self.buckets[k])
        self.sq = sum(len(b) ** 2 for b in self.buckets[:k])

    @property
    def n_ungrouped(self) -> int:
        return len(self.buckets[self.k])

    def size(self, j: int) -> int:
        return len(self.buckets[j])

    def cost_of(self, n_u: int, total: int, sq: int) -> float:
        return self.alpha * n_u + (1 - self.alpha) * _variance(self.k, total, sq, self.variance)

    def cost(self) -> float:
        return self.cost_of(self.n_ungrouped, self.total, self.sq)

    def move(self, v: int, dst: int) -> None:
        src = self.color[v]
        if src == dst:
            return
        k = self.k
        b = self.buckets[src]
        last = b.pop()
        if last != v:
            b[self.slot[v]] = last
            self.slot[last] = self.slot[v]
        if src < k:
            s = len(b)  # size after removal
            self.sq += s * s - (s + 1) ** 2
            self.total -= 1
        d = self.buckets[dst]
        self.slot[v] = len(d)
        d.append(v)
        if dst < k:
            s = len(d)
            self.sq += s * s - (s - 1) ** 2
            self.total += 1
        self.color[v] = dst
        cnt = self.cnt
        for y in self.adj[v]:
            row = cnt[y]
            row[src] -= 1
            row[dst] += 1

    def neighbours_in(self, v: int, j: int) -> list[int]:
        color = self.color
        return [y for y in self.adj[v] if color[y] == j]

    def solution(self) -> GroupingSolution:
        return GroupingSolution.from_colors(self.color, self.k)

    def check(self) -> None:
        """Recompute everything from scratch and compare (debug only)."""
        k = self.k
        n = self.g.n
        members = sorted(v for b in self.buckets for v in b)
        if members != list(range(n)):
            raise AssertionError("buckets do not partition the node set")
        for j, b in enumerate(self.buckets):
            for i, v in enumerate(b):
                if self.color[v] != j or self.slot[v] != i:
                    raise AssertionError(f"bucket bookkeeping broken at node {v}")
        for v in range(n):
            expect = [0] * (k + 1)
            for y in self.adj[v]:
                expect[self.color[y]] += 1
            if expect != self.cnt[v]:
                raise AssertionError(f"neighbour counts stale at node {v}")
        sol = self.solution()
        if sum(sol.sizes) + len(sol.ungrouped) != n:
            raise AssertionError("partition size mismatch")
        if not is_proper(sol, self.g):
            raise AssertionError("solution became improper")
        ref = joint_cost(sol, self.alpha, self.variance) if self.alpha < 1 else float(len(sol.ungrouped))
        if abs(ref - self.cost()) > 1e-9:
            raise AssertionError(f"incremental cost {self.cost()} != recomputed {ref}")


class TabuResult(NamedTuple):
    solution: GroupingSolution
    cost: float
    iterations: int


def _tenure(params: CostParams, rng: random.Random) -> int:
    return params.tabu_tenure_base + rng.randrange(params.tabu_tenure_spread)


def _place_from_u(st: _SearchState, tabu: list[list[int]], it: int, best: float,
                  params: CostParams, rng: random.Random, explore_random: bool) -> None:
    """Move a random ungrouped node into a color set, evicting its neighbours there."""
    ubucket = st.buckets[st.k]
    u = ubucket[rng.randrange(len(ubucket))]
    row = st.cnt[u]
    forbid = tabu[u]
    n_u, total, sq = st.n_ungrouped, st.total, st.sq
    cands: list[int] = []
    best_c = float("inf")
    for j in range(st.k):
        e = row[j]
        s = len(st.buckets[j])
        ns = s + 1 - e
        c = st.cost_of(n_u - 1 + e, total + 1 - e, sq - s * s + ns * ns)
        if forbid[j] > it and not c < best:
            continue
        if explore_random:
            cands.append(j)
        elif c < best_c:
            best_c = c
            cands = [j]
        elif c == best_c:
            cands.append(j)
    if not cands:
        return
    j = cands[0] if len(cands) == 1 else cands[rng.randrange(len(cands))]
    evicted = st.neighbours_in(u, j)
    st.move(u, j)
    ku = st.k
    for y in evicted:
        st.move(y, ku)
        tabu[y][j] = it + _tenure(params, rng)


def _rebalance(st: _SearchState, tabu: list[list[int]], it: int,
               params: CostParams, rng: random.Random) -> None:
    """With nothing ungrouped, spill nodes from the largest set back into U."""
    sizes = [len(b) for b in st.buckets[: st.k]]
    hi, lo = max(sizes), min(sizes)
    top = [j for j, s in enumerate(sizes) if s == hi]
    m = top[0] if len(top) == 1 else top[rng.randrange(len(top))]
    r = max(hi - lo, 1)
    for y in rng.sample(st.buckets[m], r):
        st.move(y, st.k)
        tabu[y][m] = it + _tenure(params, rng)


def _prepare(s0: GroupingSolution, g: UndirectedGraph) -> list[int]:
    if s0.n != g.n:
        raise ValueError("initial solution does not match the graph's node count")
    if not is_proper(s0, g):
        raise ValueError("initial solution is improper")
    return s0.colors(g.n)


def modified_tabu_search(s0: GroupingSolution, g_prime: UndirectedGraph, params: CostParams,
                         rng: random.Random, *, debug: bool = False,
                         history: list | None = None) -> TabuResult:
    """Minimize the joint cost from a proper start, never breaking properness.

    Runs ``params.max_ts_iterations`` moves (fewer if REvES is enabled and
    fires) and returns the lowest-cost solution seen. With ungrouped nodes
    present, one of them is placed into its cheapest admissible set; with
    none, the largest set sheds ``|S_max| - |S_min|`` random members (at
    least one) to U. Tabu moves are admitted only when they beat the best
    cost so far.

    ``history``, when given, receives ``(current_cost, best_cost)`` after
    every move. ``debug`` re-verifies all bookkeeping after every move.
    """
    colors = _prepare(s0, g_prime)
    k = s0.k
    st = _SearchState(g_prime, colors, k, params.alpha, params.variance)
    tabu = [[0] * (k + 1) for _ in range(g_prime.n)]
    best = st.cost()
    best_colors = list(st.color)
    monitor = RevesMonitor(params.reves_ws, params.reves_p) if params.reves_enabled else None
    explore_random = params.placement == "random"
    raw_stream = params.reves_stream == "raw"
    it = 0
    while it < params.max_ts_iterations:
        it += 1
        if st.n_ungrouped:
            _place_from_u(st, tabu, it, best, params, rng, explore_random)
        else:
            _rebalance(st, tabu, it, params, rng)
        c = st.cost()
        if c < best:
            best = c
            best_colors = list(st.color)
        if debug:
            st.check()
        if history is not None:
            history.append((c, best))
        if monitor is not None and monitor.update(c if raw_stream else best):
            break
    sol = GroupingSolution.from_colors(best_colors, k)
    return TabuResult(sol, joint_cost(sol, params.alpha, params.variance), it)


def partialcol_search(s0: GroupingSolution, g: UndirectedGraph, params: CostParams,
                      rng: random.Random, *, debug: bool = False) -> TabuResult:
    """Classic PartialCol tabu search: drive |U| to zero or run out of moves.

    Returns the solution with the fewest ungrouped nodes seen; its cost is
    that count.
    """
    colors = _prepare(s0, g)
    k = s0.k
    st = _SearchState(g, colors, k, 1.0, params.variance)
    tabu = [[0] * (k + 1) for _ in range(g.n)]
    best = st.n_ungrouped
    best_colors = list(st.color)
    explore_random = params.placement == "random"
    it = 0
    while best and it < params.max_ts_iterations:
        it += 1
        _place_from_u(st, tabu, it, best, params, rng, explore_random)
        if debug:
            st.check()
        if st.n_ungrouped < best:
            best = st.n_ungrouped
            best_colors = list(st.color)
    return TabuResult(GroupingSolution.from_colors(best_colors, k), float(best), it)

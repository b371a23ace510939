"""Reference colorers that always return complete proper colorings."""

from __future__ import annotations

import random
from typing import NamedTuple

from ..graph import UndirectedGraph
from .greedy import dsatur, elf_greedy, random_greedy
from .solution import CostParams, GroupingSolution
from .tabu import partialcol_search


class ColoringResult(NamedTuple):
    k: int
    solution: GroupingSolution
    iterations: int


def partialcol_baseline(g_prime: UndirectedGraph, params: CostParams, rng: random.Random,
                        *, init: str = "greedy") -> ColoringResult:
    """PartialCol: from the DSatur count, empty U by tabu search, then try k - 1.

    Each k starts from a fresh random-order first-fit coloring (or ELF with
    ``init="elf"``). Returns the last k for which U was emptied; the DSatur
    coloring is the fallback, so U is always empty.
    """
    if init not in ("greedy", "elf"):
        raise ValueError("init must be 'greedy' or 'elf'")
    k, saved = dsatur(g_prime)
    saved_k = k
    used = 0
    while k >= 1:
        if init == "elf":
            s0, _ = elf_greedy(g_prime, k, params.alpha, params.variance)
        else:
            s0 = random_greedy(g_prime, k, rng)
        res = partialcol_search(s0, g_prime, params, rng)
        used += res.iterations
        if res.solution.ungrouped:
            break
        saved, saved_k = res.solution, k
        k -= 1
    return ColoringResult(saved_k, saved, used)


def _first_fit_or_random(g: UndirectedGraph, k: int, rng: random.Random) -> list[int]:
    """Random-order first-fit; a node with no proper set takes a random one."""
    order = list(range(g.n))
    rng.shuffle(order)
    adj = g.adjacency
    color = [-1] * g.n
    for v in order:
        taken = {color[y] for y in adj[v]}
        free = next((j for j in range(k) if j not in taken), None)
        color[v] = free if free is not None else rng.randrange(k)
    return color


def _tabucol_search(g: UndirectedGraph, k: int, params: CostParams,
                    rng: random.Random) -> tuple[list[int] | None, int]:
    """Minimize clashes of a complete k-coloring; returns (colors or None, iterations)."""
    n = g.n
    adj = g.adjacency
    color = _first_fit_or_random(g, k, rng)
    cnt = [[0] * k for _ in range(n)]
    for v in range(n):
        row = cnt[v]
        for y in adj[v]:
            row[color[y]] += 1
    conflicted = {v for v in range(n) if cnt[v][color[v]]}
    clash = sum(cnt[v][color[v]] for v in range(n)) // 2
    best = clash
    tabu = [[0] * k for _ in range(n)]
    it = 0
    while clash and it < params.max_ts_iterations:
        it += 1
        best_d = None
        moves: list[tuple[int, int]] = []
        for v in conflicted:
            row = cnt[v]
            cv = color[v]
            here = row[cv]
            forbid = tabu[v]
            for c in range(k):
                if c == cv:
                    continue
                d = row[c] - here
                if forbid[c] > it and not clash + d < best:
                    continue
                if best_d is None or d < best_d:
                    best_d = d
                    moves = [(v, c)]
                elif d == best_d:
                    moves.append((v, c))
        if not moves:
            continue
        v, c = moves[0] if len(moves) == 1 else moves[rng.randrange(len(moves))]
        old = color[v]
        clash += best_d
        color[v] = c
        for y in adj[v]:
            row = cnt[y]
            row[old] -= 1
            row[c] += 1
            cy = color[y]
            if cy == old or cy == c:
                if row[cy]:
                    conflicted.add(y)
                else:
                    conflicted.discard(y)
        if cnt[v][c]:
            conflicted.add(v)
        else:
            conflicted.discard(v)
        tabu[v][old] = it + params.tabu_tenure_base + rng.randrange(params.tabu_tenure_spread)
        best = min(best, clash)
    return (color if clash == 0 else None), it


def tabucol_baseline(g_prime: UndirectedGraph, params: CostParams, rng: random.Random) -> ColoringResult:
    """TabuCol: complete k-coloring, tabu search on clash count, then try k - 1.

    The start is a random-order first-fit in which nodes without a proper
    set are dropped into a random set, so clashes are possible from step 0.
    """
    k, saved = dsatur(g_prime)
    saved_k = k
    used = 0
    while k >= 1:
        colors, its = _tabucol_search(g_prime, k, params, rng)
        used += its
        if colors is None:
            break
        saved, saved_k = GroupingSolution.from_colors(colors, k), k
        k -= 1
    return ColoringResult(saved_k, saved, used)

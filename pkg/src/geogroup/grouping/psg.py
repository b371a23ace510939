"""Partial-Steady Grouping: shrink the group count while the joint cost keeps improving."""

from __future__ import annotations

import random

from ..graph import UndirectedGraph
from ..seeding import make_rng
from .greedy import dsatur, elf_greedy, random_greedy
from .solution import CostParams, GroupingOutcome
from .tabu import modified_tabu_search


def psg(g_prime: UndirectedGraph, params: CostParams, rng: random.Random, *,
        init: str = "elf", debug: bool = False) -> GroupingOutcome:
    """Group the nodes of ``g_prime`` (the complement of the suitability graph).

    Starts at the DSatur color count. Each step lowers k by one and reruns
    the initializer plus modified tabu search; it keeps going while the new
    cost is at most ``tr`` times the previous one, otherwise it returns the
    previous (k, solution, cost). ``init="greedy"`` swaps the ELF start for
    a random-order first-fit start.

    Every tabu run draws its own stream from a per-call seed and the step
    index, so results do not depend on how many draws earlier steps used.
    """
    if g_prime.n == 0:
        raise ValueError("psg needs a nonempty graph")
    if init not in ("elf", "greedy"):
        raise ValueError("init must be 'elf' or 'greedy'")
    run_seed = rng.getrandbits(64)

    def solve(k: int, step: int):
        sub = make_rng(run_seed, step)
        if init == "elf":
            s0, _ = elf_greedy(g_prime, k, params.alpha, params.variance)
        else:
            s0 = random_greedy(g_prime, k, sub)
        return modified_tabu_search(s0, g_prime, params, sub, debug=debug)

    k, _ = dsatur(g_prime)
    res = solve(k, 0)
    history = [(k, res.cost)]
    used = res.iterations
    step = 1
    while k > 1:
        prev = res
        k -= 1
        res = solve(k, step)
        step += 1
        used += res.iterations
        history.append((k, res.cost))
        if res.cost > prev.cost * params.tr:
            return GroupingOutcome(prev.solution, prev.cost, used, history)
    return GroupingOutcome(res.solution, res.cost, used, history)

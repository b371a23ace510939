"""
Grouping step by step
=====================

Start from DSatur's color count, build an equitable start with ELF, and
let the joint-cost tabu search even out the groups. PSG then tries one
group fewer for as long as that keeps paying off.
"""

from geogroup.grouping import CostParams, dsatur, elf_greedy, format_solution, modified_tabu_search, psg
from geogroup.harness import build_instance
from geogroup.mobility import preset_scenario
from geogroup.seeding import make_rng

_, res, gp = build_instance(preset_scenario("dense"), seed=11)
print("nodes to group:", gp.n)

k, s_ds = dsatur(gp)
print("DSatur colors:", k, "sizes:", sorted(s_ds.sizes))

params = CostParams(alpha=0.5)
s_elf, c_elf = elf_greedy(gp, k, params.alpha)
print("ELF start sizes:", sorted(s_elf.sizes), "ungrouped:", len(s_elf.ungrouped), "cost %.3f" % c_elf)

hist = []
ts = modified_tabu_search(s_elf, gp, params, make_rng(0), history=hist)
print("tabu search: cost %.3f after %d moves" % (ts.cost, ts.iterations))
for i in (0, 10, 50, 200, len(hist) - 1):
    print("  move %4d  current %.3f  best %.3f" % (i + 1, *hist[i]))

out = psg(gp, params, make_rng(0))
print("PSG k history:", [(kk, round(c, 3)) for kk, c in out.k_history])
print(format_solution(out.solution, params.alpha).splitlines()[-1])

# same thing with early stopping
fast = psg(gp, CostParams(alpha=0.5, reves_enabled=True), make_rng(0))
print("with REvES: k=%d cost %.3f, %d moves instead of %d" % (fast.k, fast.cost, fast.iterations_used, out.iterations_used))

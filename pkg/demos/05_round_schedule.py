"""
From groups to training rounds
==============================

Each group trains in its own round, largest first; ungrouped devices sit
the phase out. A solution file round-trips through the text format the
CLI understands.
"""

from geogroup.grouping import CostParams, format_solution, parse_solution, psg
from geogroup.harness import build_instance, emit_schedule, format_schedule
from geogroup.mobility import preset_scenario
from geogroup.seeding import make_rng

_, res, gp = build_instance(preset_scenario("sparse"), seed=4)
out = psg(gp, CostParams(), make_rng(2))

text = format_solution(out.solution, 0.5)
print(text)
sol, alpha = parse_solution(text)
assert sol == out.solution

plan = emit_schedule(sol)
print(format_schedule(plan)[:400], "...")

# graph ids map back to device ids through the clustering result
first = plan[0]
print("round 1 devices:", [res.suitable_ids[g] for g in first.members][:10], "...")

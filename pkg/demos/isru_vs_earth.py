"""
ISRU against Earth resupply
===========================

Solve the two baseline lunar habitat scenarios and compare cost,
plant sizing and byproducts.
"""

from lunarflow.replay import byproduct_totals
from lunarflow.scenario import load_scenario_file, solve_scenario
from lunarflow.transforms import closed_form_sizing

isru = solve_scenario(load_scenario_file("isru_baseline"))
earth = solve_scenario(load_scenario_file("earth_baseline"))

for r in (isru, earth):
    print(f"\n{r.config.name}: ${r.total_cost / 1e6:,.2f}M, {r.plan.vehicles} vehicle(s), "
          f"replay {r.replay.verdict}")
    for cls, v in sorted(r.plan.costs.items()):
        print(f"  {cls:<11s} ${v / 1e6:>10,.3f}M")

print(f"\ncost ratio earth/isru = {earth.total_cost / isru.total_cost:.3f}")

###############################################################################
# The optimizer's plant sizes should match sizing by hand: each plant is
# its annual output divided by its yield, and the reactor covers the draw.

oracle = closed_form_sizing(10000.0, 5000.0)
print("\nplant       solved kg   by hand kg")
for cid in ("MRE", "SWE", "excavator", "FSPS"):
    print(f"{cid:<10s} {isru.plan.plants[cid]:>10.2f} {oracle[cid]:>12.2f}")

###############################################################################
# Three years of operation leave these in the disposal sink.

for k, v in byproduct_totals(isru.replay.ledger).items():
    print(f"{k:<14s} {v:>12,.2f} kg")

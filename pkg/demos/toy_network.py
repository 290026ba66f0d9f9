"""
A two-node network by hand
==========================

Build the smallest useful time-expanded network, compile it to a MILP,
solve it and replay the plan.
"""

from lunarflow.milp import compile_problem, extract_plan, solve_milp, spacecraft_commodity
from lunarflow.network import (
    ArcSpec, Commodity, CommodityRegistry, ConcurrencyRow, Node, expand,
)
from lunarflow.replay import replay

# one continuous commodity plus an integer vehicle count
reg = CommodityRegistry([Commodity("cargo"), spacecraft_commodity()])

# Earth supplies anything; the habitat wants 13 kg at t=1
nodes = [Node("E", "earth"), Node("B", "habitat", {("cargo", 1): 13.0})]

# each vehicle carries at most 10 kg and costs 100; cargo costs 1 per kg
payload = ConcurrencyRow({"cargo": 1.0, "spacecraft": -10.0}, 0.0, "payload")
leg = ArcSpec("E", "B", time_of_flight=1, concurrency=[payload],
              costs={"hardware": {"spacecraft": 100.0}, "launch": {"cargo": 1.0}})

graph = expand(nodes, [leg], horizon=[0, 1], registry=reg)
print(f"{len(graph.arcs)} arc instances:", [a.label() for a in graph.arcs])

###############################################################################
# The LP relaxation would fly 1.3 vehicles. Branch and bound rounds that up.

problem = compile_problem(graph)
solution = solve_milp(problem)
print("status", solution.status, "objective", solution.objective_value,
      "relaxation", solution.lp_bound)

plan = extract_plan(solution)
for (arc, cid), v in sorted(plan.flows.items()):
    print(f"  {graph.arcs[arc].label():10s} {cid:10s} {v:g}")

###############################################################################
# The replay rebuilds every stock from the flows alone.

check = replay(plan, graph, None)
print("replay:", check.verdict)

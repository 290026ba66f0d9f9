"""Turn a solved flow vector into ledgers, byproduct totals and a cost split."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..network import PLANT_IDS, SPACECRAFT, WASTE_IDS, TimeExpandedGraph
from .problem import Solution

NEG_TOL = 1e-9


@dataclass
class Plan:
    status: str
    objective: float
    flows: dict = field(default_factory=dict)
    ledger: dict = field(default_factory=dict)
    byproducts: dict = field(default_factory=dict)
    costs: dict = field(default_factory=dict)
    plants: dict = field(default_factory=dict)
    vehicles: int = 0
    lp_bound: float | None = None

    def flow(self, arc_index: int, cid: str) -> float:
        return self.flows.get((arc_index, cid), 0.0)


def arc_flow_vectors(graph: TimeExpandedGraph, flows: dict) -> dict:
    """``arc index -> outflow vector`` in registry order."""
    ids = graph.registry.ids
    out = {}
    for (a, cid), v in flows.items():
        out.setdefault(a, np.zeros(len(ids)))[graph.registry.index(cid)] = v
    return out


def solver_ledger(graph: TimeExpandedGraph, flows: dict, demands: dict) -> dict:
    """Stock available at each ``(node, commodity, t)`` after arrivals and demand.

    Arrivals are the transformed inflows ``Q x`` of every arc landing there.
    Source nodes are not tracked.
    """
    ids = graph.registry.ids
    vecs = arc_flow_vectors(graph, flows)
    q_cache = {}
    ledger = {}
    for node in graph.nodes:
        if node.is_source:
            continue
        for t in graph.horizon:
            total = np.zeros(len(ids))
            for arc in graph.arriving(node.id, t):
                v = vecs.get(arc.index)
                if v is None:
                    continue
                key = id(arc.spec)
                if key not in q_cache:
                    q_cache[key] = arc.spec.q_matrix(ids)
                total += q_cache[key] @ v
            for j, cid in enumerate(ids):
                ledger[(node.id, cid, t)] = float(total[j] - demands.get((node.id, cid, t), 0.0))
    return ledger


def extract_plan(solution: Solution, graph: TimeExpandedGraph | None = None) -> Plan:
    problem = solution.problem
    graph = graph or problem.graph
    if not solution.optimal or solution.x is None:
        return Plan(solution.status, solution.objective_value, lp_bound=solution.lp_bound)

    x = np.where(np.abs(solution.x) <= NEG_TOL, 0.0, solution.x)
    flows = {problem.variables[k]: float(v) for k, v in enumerate(x) if v != 0.0}
    ledger = solver_ledger(graph, flows, problem.demands)

    sinks = [n.id for n in graph.nodes if n.kind == "disposal"]
    byproducts = {cid: 0.0 for cid in WASTE_IDS}
    for sid in sinks:
        for cid in WASTE_IDS:
            byproducts[cid] += max(0.0, ledger.get((sid, cid, graph.final), 0.0))
    byproducts["dsoil_surplus"] = byproducts.pop("dsoil")

    costs = {cls: float(vec @ x) for cls, vec in sorted(problem.cost_parts.items())}
    costs["total"] = float(problem.c @ x)

    plants = {}
    for arc in graph.arcs:
        if arc.spec.role != "isru":
            continue
        for cid in PLANT_IDS:
            plants[cid] = max(plants.get(cid, 0.0), flows.get((arc.index, cid), 0.0))

    vehicles = 0
    for arc in graph.arcs:
        if arc.spec.role == "launch":
            vehicles += int(round(flows.get((arc.index, SPACECRAFT), 0.0)))

    return Plan(
        status=solution.status,
        objective=float(solution.objective_value),
        flows=flows,
        ledger=ledger,
        byproducts=byproducts,
        costs=costs,
        plants=plants,
        vehicles=vehicles,
        lp_bound=solution.lp_bound,
    )

"""Forward replay of a solved plan from first principles.

The replay never touches the solver or the compiled transformation
matrices. It recomputes what each arc delivers from the plant rate tables
(ISRU arcs) or the rocket equation (powered legs), rebuilds every node's
stock timestep by timestep, and checks conservation, stock signs, power,
capacities and windows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .network import SPACECRAFT, WASTE_IDS, TimeExpandedGraph
from .transforms import COMPONENTS, ComponentRates, DeltaVTable, PropulsionSpec

REL_TOL = 1e-6


@dataclass(frozen=True)
class ReplayPhysics:
    rates: Mapping[str, ComponentRates]
    maintenance_rate: float
    propulsion: PropulsionSpec
    delta_v: DeltaVTable
    mixture_ratio: float
    timestep_years: float = 1.0


@dataclass(frozen=True)
class Violation:
    check: str
    node: str | None
    commodity: str | None
    timestep: int | None
    detail: str

    def __str__(self) -> str:
        return f"{self.check} at node={self.node} commodity={self.commodity} t={self.timestep}: {self.detail}"


@dataclass
class Ledger:
    stocks: dict
    horizon: tuple
    sinks: tuple
    power: dict = field(default_factory=dict)

    def stock(self, node: str, cid: str, t: int) -> float:
        return self.stocks.get((node, cid, t), 0.0)


@dataclass
class ReplayResult:
    ledger: Ledger
    violations: list

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def first_violation(self) -> Violation | None:
        return self.violations[0] if self.violations else None


def _isru_delivery(x: dict, phys: ReplayPhysics) -> tuple[dict, float, float]:
    out = dict(x)
    dt = phys.timestep_years
    draw = 0.0
    supply = 0.0
    for comp in COMPONENTS:
        mass = x.get(comp, 0.0)
        if not mass:
            continue
        r = phys.rates[comp]
        for cid, a in r.products.items():
            out[cid] = out.get(cid, 0.0) + a * mass * dt
        for cid, b in r.consumptions.items():
            out[cid] = out.get(cid, 0.0) - b * mass * dt
        if r.power >= 0:
            supply += r.power * mass
        else:
            draw += -r.power * mass
        out["spares"] = out.get("spares", 0.0) - phys.maintenance_rate * mass * dt
    out["power"] = out.get("power", 0.0) + supply - draw
    return out, draw, supply


def _burn(x: dict, dv: float, phys: ReplayPhysics, mass_ids) -> float:
    prop = phys.propulsion
    m0 = sum(x.get(c, 0.0) for c in mass_ids) + prop.structure_mass * x.get(SPACECRAFT, 0.0)
    # burn from the initial mass: m0 (1 - exp(-dv / ve))
    return -m0 * math.expm1(-dv / prop.exhaust_velocity)


def replay(plan, graph: TimeExpandedGraph, physics: ReplayPhysics) -> ReplayResult:
    """Rebuild stocks from ``plan.flows`` and check the plan is physical."""
    flows = plan.flows if hasattr(plan, "flows") else dict(plan)
    demands = graph.demands()
    reg = graph.registry
    ids = reg.ids
    mass_ids = reg.mass_ids()
    violations: list[Violation] = []

    per_arc: dict = {}
    for (a, cid), v in flows.items():
        per_arc.setdefault(a, {})[cid] = v

    delivered: dict = {}
    power_log: dict = {}
    for arc in graph.arcs:
        x = per_arc.get(arc.index, {})
        spec = arc.spec
        for cid, v in sorted(x.items()):
            if v < -REL_TOL:
                violations.append(Violation("negative-flow", spec.origin, cid, arc.depart, f"{arc.label()} = {v:.6g}"))
            if v != 0.0 and not spec.is_open(cid, arc.depart):
                violations.append(Violation("window", spec.origin, cid, arc.depart,
                                            f"{arc.label()} carries {v:.6g} while closed"))
        if spec.role == "isru":
            out, draw, supply = _isru_delivery(x, physics)
            power_log[(spec.origin, arc.depart)] = (draw, supply)
            if draw > supply * (1 + REL_TOL) + REL_TOL:
                violations.append(Violation("power", spec.origin, "power", arc.depart,
                                            f"draw {draw:.6g} kW exceeds generation {supply:.6g} kW"))
        elif spec.role == "propulsive":
            dv = physics.delta_v.leg(spec.origin, spec.dest)
            burn = _burn(x, dv, physics, mass_ids)
            ox = physics.mixture_ratio / (1.0 + physics.mixture_ratio)
            out = dict(x)
            out["O2"] = out.get("O2", 0.0) - ox * burn
            out["H2"] = out.get("H2", 0.0) - (1.0 - ox) * burn
            cap = physics.propulsion.propellant_capacity * x.get(SPACECRAFT, 0.0)
            if burn > cap * (1 + REL_TOL) + REL_TOL:
                violations.append(Violation("propellant-capacity", spec.origin, "propellant", arc.depart,
                                            f"{arc.label()} burns {burn:.6g} kg, tanks hold {cap:.6g} kg"))
        else:
            out = dict(x)
        for cid, v in out.items():
            scale = max(1.0, abs(x.get(cid, 0.0)), max((abs(w) for w in x.values()), default=0.0))
            if v < -REL_TOL * scale:
                violations.append(Violation("negative-inflow", spec.dest, cid, arc.arrive,
                                            f"{arc.label()} delivers {v:.6g}"))
        delivered[arc.index] = out

        for row in spec.concurrency:
            lhs = row.evaluate(x)
            scale = max(1.0, abs(row.bound), sum(abs(w * x.get(c, 0.0)) for c, w in row.coefficients.items()))
            if lhs > row.bound + REL_TOL * scale:
                violations.append(Violation("concurrency", spec.origin, None, arc.depart,
                                            f"{arc.label()} {row.description}: {lhs:.6g} > {row.bound:.6g}"))

    stocks = {}
    for t in graph.horizon:
        for node in graph.nodes:
            if node.is_source:
                continue
            for cid in ids:
                arrivals = sum(delivered[a.index].get(cid, 0.0) for a in graph.arriving(node.id, t))
                departures = sum(per_arc.get(a.index, {}).get(cid, 0.0) for a in graph.departing(node.id, t))
                demand = demands.get((node.id, cid, t), 0.0)
                available = arrivals - demand
                stocks[(node.id, cid, t)] = available
                scale = 1.0 + max(abs(arrivals), abs(departures), abs(demand))
                tol = REL_TOL * scale
                if available < -tol:
                    check = "demand" if demand > 0 else "negative-stock"
                    violations.append(Violation(check, node.id, cid, t,
                                                f"arrivals {arrivals:.6g} short of demand {demand:.6g}"))
                    continue
                left = available - departures
                terminal = t == graph.final and cid not in node.clear_at_end
                if terminal:
                    if left < -tol:
                        violations.append(Violation("balance", node.id, cid, t,
                                                    f"departures {departures:.6g} exceed stock {available:.6g}"))
                elif abs(left) > tol:
                    violations.append(Violation("balance", node.id, cid, t,
                                                f"stock {available:.6g} vs departures {departures:.6g}"))

    violations.sort(key=lambda v: (v.timestep if v.timestep is not None else -1, str(v.node), str(v.commodity)))
    sinks = tuple(n.id for n in graph.nodes if n.kind == "disposal")
    return ReplayResult(Ledger(stocks, graph.horizon, sinks, power_log), violations)


def byproduct_totals(ledger: Ledger) -> dict:
    """Horizon-end contents of the disposal sink(s)."""
    end = ledger.horizon[-1]
    out = {}
    for cid in WASTE_IDS:
        out[cid] = sum(max(0.0, ledger.stock(s, cid, end)) for s in ledger.sinks)
    return {
        "slag": out["slag"],
        "metals": out["metals"],
        "emissions": out["emissions"],
        "dsoil_surplus": out["dsoil"],
    }


def compare_ledgers(solver: dict, replayed: Ledger, rel: float = REL_TOL) -> list:
    """Cells where the solver-side and replayed stocks disagree."""
    bad = []
    for key in sorted(set(solver) | set(replayed.stocks), key=str):
        a = solver.get(key, 0.0)
        b = replayed.stocks.get(key, 0.0)
        if abs(a - b) > rel * (1.0 + max(abs(a), abs(b))):
            bad.append((key, a, b))
    return bad

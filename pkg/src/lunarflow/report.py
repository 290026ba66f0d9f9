"""Solve and sweep reports as plain files.

The structured report is JSON with sorted keys and no timestamps, so two runs
on the same scenario produce byte-identical files. Tables are CSV.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .network import PLANT_IDS
from .replay import compare_ledgers
from .transforms import METAL_SPLIT, plant_power_draw

SWEEP_HEADER = ("value", "total_cost", "slag_kg", "metals_kg", "emissions_kg")
FLOW_HEADER = ("arc", "depart", "arrive", "commodity", "flow")
LEDGER_HEADER = ("node", "commodity", "timestep", "solver", "replay")
ZERO_TOL = 1e-9


def _num(v):
    # JSON has no NaN/inf; report them as null
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return None
    return float(v)


def metal_split(metals_kg: float) -> dict:
    """Split a metals total by the MRE per-element yields."""
    total = sum(METAL_SPLIT.values())
    return {el: metals_kg * r / total for el, r in METAL_SPLIT.items()}


def flow_rows(result) -> list[tuple]:
    graph = result.graph
    rows = []
    for (a, cid), v in result.plan.flows.items():
        if abs(v) <= ZERO_TOL:
            continue
        arc = graph.arcs[a]
        rows.append((arc.spec.name, arc.depart, arc.arrive, cid, v))
    rows.sort(key=lambda r: (r[1], r[0], r[2], r[3]))
    return rows


def ledger_rows(result) -> list[tuple]:
    solver = result.plan.ledger
    replayed = result.replay.ledger.stocks if result.replay is not None else {}
    rows = []
    for key in sorted(set(solver) | set(replayed), key=lambda k: (k[2], k[0], k[1])):
        a = solver.get(key, 0.0)
        b = replayed.get(key, 0.0)
        if abs(a) <= ZERO_TOL and abs(b) <= ZERO_TOL:
            continue
        node, cid, t = key
        rows.append((node, cid, t, a, b))
    return rows


def solve_report(result) -> dict:
    """Everything a solve produced, as plain JSON-ready data."""
    config = result.config
    sol = result.solution
    plan = result.plan
    out = {
        "scenario": config.name,
        "isru_enabled": config.isru_enabled,
        "horizon_years": config.horizon_years,
        "status": sol.status,
        "message": sol.message,
        "objective": _num(plan.objective),
        "lp_bound": _num(sol.lp_bound),
        "gap": _num(sol.gap),
        "branch_nodes": sol.nodes,
    }
    if not sol.optimal:
        return out
    plants = {}
    for cid in PLANT_IDS:
        mass = plan.plants.get(cid, 0.0)
        plants[cid] = {"mass_kg": mass, "power_kw": plant_power_draw(mass, config.rates[cid])}
    out.update({
        "costs": dict(plan.costs),
        "vehicles": plan.vehicles,
        "plants": plants,
        "byproducts": dict(plan.byproducts),
        "metal_split": metal_split(plan.byproducts.get("metals", 0.0)),
        "flows": [
            {"arc": a, "depart": d, "arrive": r, "commodity": c, "flow": v}
            for a, d, r, c, v in flow_rows(result)
        ],
        "ledger": [
            {"node": n, "commodity": c, "timestep": t, "solver": s, "replay": p}
            for n, c, t, s, p in ledger_rows(result)
        ],
    })
    rep = result.replay
    if rep is not None:
        first = rep.first_violation
        out["replay"] = {
            "verdict": rep.verdict,
            "violations": len(rep.violations),
            "first_violation": None if first is None else {
                "check": first.check, "node": first.node, "commodity": first.commodity,
                "timestep": first.timestep, "detail": first.detail,
            },
            "ledger_mismatches": len(compare_ledgers(plan.ledger, rep.ledger)),
            "power": [
                {"node": n, "timestep": t, "draw_kw": d, "supply_kw": s}
                for (n, t), (d, s) in sorted(rep.ledger.power.items())
            ],
        }
    return out


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def sweep_csv(rows) -> str:
    """Sweep table; failed rows carry empty metric cells."""
    out = []
    for r in rows:
        if r.status == "optimal":
            out.append((r.value, r.total_cost, r.slag_kg, r.metals_kg, r.emissions_kg))
        else:
            out.append((r.value, "", "", "", ""))
    return _csv_text(SWEEP_HEADER, out)


def write_solve_outputs(result, out_dir: Path, fmt: str | None = None) -> list[Path]:
    """Write the JSON report and/or CSV tables; returns the paths written."""
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = result.config.name
    written = []
    if fmt in (None, "structured"):
        p = out_dir / f"{stem}.json"
        p.write_text(dumps(solve_report(result)))
        written.append(p)
    if fmt in (None, "csv") and result.solution.optimal:
        p = out_dir / f"{stem}_flows.csv"
        p.write_text(_csv_text(FLOW_HEADER, flow_rows(result)))
        written.append(p)
        p = out_dir / f"{stem}_ledger.csv"
        p.write_text(_csv_text(LEDGER_HEADER, ledger_rows(result)))
        written.append(p)
    return written


def summarize(report: dict) -> str:
    """Human-readable digest of a structured solve report."""
    lines = [f"scenario {report['scenario']}: {report['status']}"]
    if report.get("objective") is not None:
        lines.append(f"total cost        ${report['objective']:,.2f}")
    for cls, v in sorted(report.get("costs", {}).items()):
        if cls != "total":
            lines.append(f"  {cls:<16}${v:,.2f}")
    if "vehicles" in report:
        lines.append(f"vehicles          {report['vehicles']}")
    for cid, p in sorted(report.get("plants", {}).items()):
        if p["mass_kg"] > 0:
            lines.append(f"plant {cid:<12}{p['mass_kg']:,.2f} kg  {p['power_kw']:,.3f} kW")
    for k, v in sorted(report.get("byproducts", {}).items()):
        lines.append(f"byproduct {k:<14}{v:,.2f} kg")
    rep = report.get("replay")
    if rep:
        lines.append(f"replay            {rep['verdict']} ({rep['violations']} violations)")
    return "\n".join(lines) + "\n"


def summary_csv(report: dict) -> str:
    rows = [("status", report["status"]), ("total_cost", report.get("objective"))]
    rows += [(f"cost_{k}", v) for k, v in sorted(report.get("costs", {}).items()) if k != "total"]
    rows += [(f"{k}_kg", v) for k, v in sorted(report.get("byproducts", {}).items())]
    rows += [(f"plant_{k}_kg", p["mass_kg"]) for k, p in sorted(report.get("plants", {}).items())]
    if report.get("replay"):
        rows.append(("replay", report["replay"]["verdict"]))
    return _csv_text(("field", "value"), rows)

"""Compile a time-expanded graph into the flow MILP and solve its relaxation."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..network import SPACECRAFT, Commodity, DISCRETE, TimeExpandedGraph
from .simplex import FEAS_TOL, LPResult, linprog_bounded, scale_factors


class CompileError(ValueError):
    pass


def spacecraft_commodity() -> Commodity:
    """Integer vehicle count carried alongside the continuous flows."""
    return Commodity(SPACECRAFT, DISCRETE, "count")


@dataclass
class MilpProblem:
    """``min c x  s.t.  A_eq x = b_eq,  A_ub x <= b_ub,  lb <= x <= ub``.

    Column ``k`` is the flow of ``variables[k][1]`` on arc instance
    ``variables[k][0]``. Balance rows at the final timestep are inequalities
    (stock may be left over) unless the node must clear that commodity.
    """

    graph: TimeExpandedGraph
    variables: list
    c: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray
    eq_labels: list
    A_ub: np.ndarray
    b_ub: np.ndarray
    ub_labels: list
    lb: np.ndarray
    ub: np.ndarray
    integer: np.ndarray
    cost_parts: dict
    demands: dict
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.c.size

    def column(self, arc_index: int, cid: str) -> int:
        return arc_index * len(self.graph.registry) + self.graph.registry.index(cid)

    def fixed_zero(self) -> np.ndarray:
        return (self.lb == 0) & (self.ub == 0)

    @classmethod
    def from_arrays(cls, c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, lb=None, ub=None, integer=None):
        """Plain-matrix problem with no network attached."""
        c = np.asarray(c, dtype=float)
        n = c.size
        A_eq = np.zeros((0, n)) if A_eq is None else np.asarray(A_eq, dtype=float).reshape(-1, n)
        A_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=float).reshape(-1, n)
        b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float)
        b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float)
        return cls(
            graph=None,
            variables=[(k, "x") for k in range(n)],
            c=c,
            A_eq=A_eq, b_eq=b_eq, eq_labels=[("eq", i) for i in range(len(b_eq))],
            A_ub=A_ub, b_ub=b_ub, ub_labels=[("ub", i) for i in range(len(b_ub))],
            lb=np.zeros(n) if lb is None else np.asarray(lb, dtype=float),
            ub=np.full(n, np.inf) if ub is None else np.asarray(ub, dtype=float),
            integer=np.zeros(n, dtype=bool) if integer is None else np.asarray(integer, dtype=bool),
            cost_parts={},
            demands={},
        )

    def with_bounds(self, lb: np.ndarray, ub: np.ndarray) -> "MilpProblem":
        out = MilpProblem(**{f: getattr(self, f) for f in self.__dataclass_fields__ if f != "_cache"})
        out.lb = lb
        out.ub = ub
        return out


@dataclass
class Solution:
    status: str
    objective_value: float
    x: np.ndarray | None
    problem: MilpProblem
    duals: dict | None = None
    dual_objective: float | None = None
    lp_bound: float | None = None
    gap: float | None = None
    nodes: int = 0
    iterations: int = 0
    message: str = ""
    pivot: dict | None = None
    extras: dict = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"

    @property
    def flows(self) -> dict:
        """``(arc index, commodity) -> flow`` for every nonzero variable."""
        if self.x is None:
            return {}
        return {self.problem.variables[k]: float(v) for k, v in enumerate(self.x) if v != 0.0}


def compile_problem(
    graph: TimeExpandedGraph,
    demands: dict | None = None,
    costs: dict | None = None,
) -> MilpProblem:
    """Build the MILP for ``graph``.

    Parameters
    ----------
    demands : dict, optional
        ``(node, commodity, t) -> amount`` (positive consumes, negative
        supplies). Defaults to the demand schedules on the graph's nodes.
    costs : dict, optional
        ``arc name -> {cost class -> {commodity -> coefficient}}`` replacing
        the costs stored on the matching arc specs.
    """
    reg = graph.registry
    ids = reg.ids
    C = len(ids)
    demands = graph.demands() if demands is None else dict(demands)
    costs = costs or {}
    tset = set(graph.horizon)
    node_ids = {n.id for n in graph.nodes}
    for (nid, cid, t), amount in demands.items():
        if nid not in node_ids:
            raise CompileError(f"demand at unknown node {nid!r}")
        if cid not in reg:
            raise CompileError(f"demand for unregistered commodity {cid!r} at {nid}")
        if t not in tset:
            raise CompileError(f"demand at {nid}/{cid} timestep {t} lies outside the horizon")
        if amount and graph.node(nid).is_source:
            raise CompileError(f"demand at source node {nid!r} is not representable")

    n_arcs = len(graph.arcs)
    nvar = n_arcs * C
    variables = [(arc.index, cid) for arc in graph.arcs for cid in ids]
    c = np.zeros(nvar)
    lb = np.zeros(nvar)
    ub = np.full(nvar, np.inf)
    integer = np.zeros(nvar, dtype=bool)
    classes = sorted({cls for spec in graph.specs for cls in costs.get(spec.name, spec.costs)})
    parts = {cls: np.zeros(nvar) for cls in classes}
    int_cols = np.array([reg[cid].is_integer for cid in ids])

    q_cache = {}
    for arc in graph.arcs:
        spec = arc.spec
        base = arc.index * C
        spec_costs = costs.get(spec.name, spec.costs)
        for cls, part in spec_costs.items():
            for cid, value in part.items():
                if cid not in reg:
                    raise CompileError(f"arc {spec.name!r} prices unregistered commodity {cid!r}")
                parts[cls][base + reg.index(cid)] += value
        integer[base:base + C] = int_cols
        for j, cid in enumerate(ids):
            if not spec.is_open(cid, arc.depart):
                ub[base + j] = 0.0
        if id(spec) not in q_cache:
            try:
                q_cache[id(spec)] = spec.q_matrix(ids)
            except ValueError as exc:
                raise CompileError(f"arc {spec.name!r}: {exc}") from exc
    for vec in parts.values():
        c += vec

    eq_rows, eq_b, eq_labels = [], [], []
    ub_rows, ub_b, ub_labels = [], [], []
    for node in graph.nodes:
        if node.is_source:
            continue
        for t in graph.horizon:
            block = np.zeros((C, nvar))
            for arc in graph.arriving(node.id, t):
                block[:, arc.index * C:(arc.index + 1) * C] += q_cache[id(arc.spec)]
            for arc in graph.departing(node.id, t):
                cols = arc.index * C + np.arange(C)
                block[np.arange(C), cols] -= 1.0
            for j, cid in enumerate(ids):
                d = float(demands.get((node.id, cid, t), 0.0))
                row = block[j]
                label = ("balance", node.id, t, cid)
                if t == graph.final and cid not in node.clear_at_end:
                    ub_rows.append(-row)
                    ub_b.append(-d)
                    ub_labels.append(label)
                else:
                    eq_rows.append(row)
                    eq_b.append(d)
                    eq_labels.append(label)

    for arc in graph.arcs:
        for k, row in enumerate(arc.spec.concurrency):
            vec = np.zeros(nvar)
            for cid, w in row.coefficients.items():
                if cid not in reg:
                    raise CompileError(f"concurrency row on {arc.spec.name!r} uses unregistered {cid!r}")
                vec[arc.index * C + reg.index(cid)] += w
            ub_rows.append(vec)
            ub_b.append(float(row.bound))
            ub_labels.append(("concurrency", arc.label(), row.description or f"row{k}"))

    def stack(rows):
        return np.array(rows) if rows else np.zeros((0, nvar))

    return MilpProblem(
        graph=graph,
        variables=variables,
        c=c,
        A_eq=stack(eq_rows),
        b_eq=np.array(eq_b, dtype=float),
        eq_labels=eq_labels,
        A_ub=stack(ub_rows),
        b_ub=np.array(ub_b, dtype=float),
        ub_labels=ub_labels,
        lb=lb,
        ub=ub,
        integer=integer,
        cost_parts=parts,
        demands=demands,
    )


def _reduce(problem: MilpProblem):
    """Drop fixed columns and the rows they leave empty.

    Returns the reduced arrays plus the kept column/row masks, or a string
    naming the first row that becomes infeasible outright.
    """
    fixed = problem.lb == problem.ub
    keep = ~fixed
    xf = np.where(fixed, problem.lb, 0.0)
    beq = problem.b_eq - problem.A_eq @ xf
    bub = problem.b_ub - problem.A_ub @ xf
    Aeq = problem.A_eq[:, keep]
    Aub = problem.A_ub[:, keep]
    eq_live = np.any(Aeq != 0, axis=1)
    ub_live = np.any(Aub != 0, axis=1)
    tol = FEAS_TOL * (1.0 + max(np.abs(problem.b_eq).max(initial=0.0), np.abs(problem.b_ub).max(initial=0.0)))
    dead_eq = np.flatnonzero(~eq_live & (np.abs(beq) > tol))
    if dead_eq.size:
        return f"row {problem.eq_labels[dead_eq[0]]} cannot be met"
    dead_ub = np.flatnonzero(~ub_live & (bub < -tol))
    if dead_ub.size:
        return f"row {problem.ub_labels[dead_ub[0]]} cannot be met"
    return Aeq[eq_live], beq[eq_live], Aub[ub_live], bub[ub_live], keep, xf, eq_live, ub_live


def _reduced(problem: MilpProblem):
    # the matrix only changes with the problem's own fixed columns, so branch
    # and bound children share one reduction and one set of scale factors
    key = (problem.lb == problem.ub).tobytes()
    hit = problem._cache.get(key)
    if hit is None:
        red = _reduce(problem)
        scaling = None if isinstance(red, str) else scale_factors(red[0], red[2])
        hit = problem._cache[key] = (red, scaling)
    return hit


def solve_lp(problem: MilpProblem, lb=None, ub=None) -> Solution:
    """Solve the continuous relaxation (integrality dropped).

    ``lb``/``ub`` tighten the problem's own bounds for this solve only.
    """
    lb = problem.lb if lb is None else np.maximum(lb, problem.lb)
    ub = problem.ub if ub is None else np.minimum(ub, problem.ub)
    if np.any(lb > ub):
        return Solution("infeasible", float("nan"), None, problem, message="crossed bounds")
    reduced, scaling = _reduced(problem)
    if isinstance(reduced, str):
        return Solution("infeasible", float("nan"), None, problem, message=reduced)
    Aeq, beq, Aub, bub, keep, xf, eq_live, ub_live = reduced
    res: LPResult = linprog_bounded(
        problem.c[keep], Aeq, beq, Aub, bub, lb[keep], ub[keep], scaling=scaling
    )
    if res.status != "optimal":
        return Solution(res.status, float("nan"), None, problem, iterations=res.iterations,
                        message=res.message, pivot=res.pivot)
    x = xf.copy()
    x[keep] = res.x
    y_eq = np.zeros(len(problem.eq_labels))
    y_eq[eq_live] = res.y_eq
    y_ub = np.zeros(len(problem.ub_labels))
    y_ub[ub_live] = res.y_ub
    duals = {lab: float(v) for lab, v in zip(problem.eq_labels, y_eq)}
    duals.update({lab: float(v) for lab, v in zip(problem.ub_labels, y_ub)})
    fixed_obj = float(problem.c[~keep] @ xf[~keep])
    objective = float(problem.c @ x)
    return Solution(
        "optimal", objective, x, problem,
        duals=duals,
        dual_objective=res.dual_objective + fixed_obj,
        lp_bound=objective,
        iterations=res.iterations,
    )


def residuals(problem: MilpProblem, x: np.ndarray) -> dict:
    """Max equality residual and max inequality violation of ``x``."""
    r_eq = np.abs(problem.A_eq @ x - problem.b_eq).max(initial=0.0)
    r_ub = np.maximum(problem.A_ub @ x - problem.b_ub, 0.0).max(initial=0.0)
    scale = 1.0 + max(np.abs(problem.b_eq).max(initial=0.0), np.abs(problem.b_ub).max(initial=0.0))
    return {"eq": float(r_eq), "ub": float(r_ub), "scale": float(scale)}


def to_lp_text(problem: MilpProblem) -> str:
    """CPLEX-LP style dump for cross-checking with an external solver."""
    names = [f"x{k}" for k in range(problem.n)]

    def expr(vec):
        terms = [f"{'-' if v < 0 else '+'} {abs(v):.17g} {names[k]}" for k, v in enumerate(vec) if v != 0]
        return " ".join(terms) if terms else "0 x0"

    lines = ["\\ " + " ".join(f"x{k}={a}:{cid}" for k, (a, cid) in enumerate(problem.variables)), "Minimize", " obj: " + expr(problem.c), "Subject To"]
    for i, row in enumerate(problem.A_eq):
        lines.append(f" e{i}: {expr(row)} = {problem.b_eq[i]:.17g}")
    for i, row in enumerate(problem.A_ub):
        lines.append(f" u{i}: {expr(row)} <= {problem.b_ub[i]:.17g}")
    lines.append("Bounds")
    for k in range(problem.n):
        hi = "+inf" if np.isinf(problem.ub[k]) else f"{problem.ub[k]:.17g}"
        lines.append(f" {problem.lb[k]:.17g} <= {names[k]} <= {hi}")
    ints = [names[k] for k in np.flatnonzero(problem.integer)]
    if ints:
        lines.append("General")
        lines.append(" " + " ".join(ints))
    lines.append("End")
    return "\n".join(lines) + "\n"

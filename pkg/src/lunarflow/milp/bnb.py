"""Best-bound branch and bound over the integer flow variables."""
from __future__ import annotations

import heapq
import math

import numpy as np

from .problem import MilpProblem, Solution, solve_lp

INT_TOL = 1e-6


def _most_fractional(x: np.ndarray, integer: np.ndarray) -> int | None:
    frac = np.abs(x - np.round(x))
    frac = np.where(integer, frac, 0.0)
    if frac.max(initial=0.0) <= INT_TOL:
        return None
    # distance from 0.5; argmin returns the lowest index on ties
    return int(np.argmin(np.where(frac > INT_TOL, np.abs(frac - 0.5), np.inf)))


def solve_milp(problem: MilpProblem, node_limit: int = 20000, rel_gap: float = 1e-9) -> Solution:
    """Solve ``problem`` to proven optimality over its integer columns.

    Nodes are explored best-bound first (ties in creation order); branching
    picks the most fractional integer column, lowest index first. On hitting
    ``node_limit`` the incumbent is returned with status ``node_limit`` and
    the remaining bound gap.
    """
    root = solve_lp(problem)
    if not root.optimal:
        return root
    root_bound = root.objective_value
    if not problem.integer.any():
        root.nodes = 1
        root.gap = 0.0
        return root

    counter = 0
    heap = [(root_bound, counter, problem.lb.copy(), problem.ub.copy(), root)]
    incumbent: Solution | None = None
    best = math.inf
    explored = 0
    iterations = 0

    def prunable(bound: float) -> bool:
        return bound >= best - rel_gap * max(1.0, abs(best))

    while heap:
        bound, _, lb, ub, sol = heapq.heappop(heap)
        if prunable(bound):
            continue
        if explored >= node_limit:
            heapq.heappush(heap, (bound, -1, lb, ub, sol))
            break
        explored += 1
        iterations += sol.iterations
        j = _most_fractional(sol.x, problem.integer)
        if j is None:
            # integral to tolerance; re-solve with the integers pinned so that
            # rounding cannot break rows with large coefficients
            x_int = np.round(sol.x[problem.integer])
            plb, pub = lb.copy(), ub.copy()
            plb[problem.integer] = x_int
            pub[problem.integer] = x_int
            polished = solve_lp(problem, plb, pub)
            if polished.optimal:
                x = polished.x.copy()
                x[problem.integer] = x_int
                value = float(problem.c @ x)
                if value < best:
                    best = value
                    incumbent = Solution("optimal", best, x, problem, duals=sol.duals,
                                         dual_objective=sol.dual_objective)
                continue
            frac = np.where(problem.integer, np.abs(sol.x - np.round(sol.x)), 0.0)
            if not frac.any():
                continue
            j = int(np.argmax(frac))
        v = sol.x[j]
        for lo, hi in ((lb[j], math.floor(v)), (math.ceil(v), ub[j])):
            if lo > hi:
                continue
            clb, cub = lb.copy(), ub.copy()
            clb[j], cub[j] = lo, hi
            child = solve_lp(problem, clb, cub)
            if child.status == "infeasible":
                continue
            if not child.optimal:
                # a bounded root cannot have an unbounded child; anything else is numerical
                return Solution(child.status, math.nan, None, problem, lp_bound=root_bound,
                                nodes=explored, message=child.message, pivot=child.pivot)
            if prunable(child.objective_value):
                continue
            counter += 1
            heapq.heappush(heap, (child.objective_value, counter, clb, cub, child))

    if incumbent is None:
        if heap:
            return Solution("node_limit", math.nan, None, problem, lp_bound=root_bound,
                            nodes=explored, iterations=iterations,
                            message="node limit reached without an integer solution")
        return Solution("infeasible", math.nan, None, problem, lp_bound=root_bound,
                        nodes=explored, iterations=iterations, message="no integer-feasible point")

    open_bound = min((h[0] for h in heap), default=best)
    gap = max(0.0, best - min(open_bound, best))
    incumbent.lp_bound = root_bound
    incumbent.nodes = explored
    incumbent.iterations = iterations
    incumbent.gap = gap
    if heap and not prunable(open_bound):
        incumbent.status = "node_limit"
        incumbent.message = f"node limit {node_limit} reached; bound gap {gap:.6g}"
    return incumbent

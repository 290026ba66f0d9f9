"""Flow MILP: compilation, bounded primal simplex, branch and bound, plan extraction."""
from .bnb import solve_milp
from .plan import Plan, extract_plan
from .problem import (
    CompileError,
    MilpProblem,
    Solution,
    compile_problem,
    residuals,
    solve_lp,
    spacecraft_commodity,
    to_lp_text,
)
from .simplex import LPResult, linprog_bounded

compile = compile_problem  # noqa: A001

__all__ = [
    "CompileError", "LPResult", "MilpProblem", "Plan", "Solution", "compile", "compile_problem",
    "extract_plan", "linprog_bounded", "residuals", "solve_lp", "solve_milp", "spacecraft_commodity",
    "to_lp_text",
]

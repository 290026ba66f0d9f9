"""Time-expanded multi-commodity flow planning for lunar ISRU campaigns."""
from .milp import compile_problem, extract_plan, solve_lp, solve_milp
from .network import (
    ArcSpec,
    Commodity,
    CommodityRegistry,
    ConcurrencyRow,
    Node,
    TimeWindow,
    TransformationMatrix,
    expand,
    register_baseline_commodities,
    validate_graph,
)
from .replay import byproduct_totals, replay
from .scenario import (
    ScenarioConfig,
    ScenarioError,
    build_earth_dependent_scenario,
    build_isru_scenario,
    load_scenario,
    load_scenario_file,
    run_sweep,
    solve_scenario,
)
from .transforms import (
    BASELINE_RATES,
    ComponentRates,
    PropulsionSpec,
    build_isru_q_matrix,
    leg_feasible,
    maintenance_demand,
    propellant_for_leg,
)

__version__ = "0.1.0"

__all__ = [
    "ArcSpec", "BASELINE_RATES", "Commodity", "CommodityRegistry", "ComponentRates",
    "ConcurrencyRow", "Node", "PropulsionSpec", "ScenarioConfig", "ScenarioError",
    "TimeWindow", "TransformationMatrix", "build_earth_dependent_scenario",
    "build_isru_q_matrix", "build_isru_scenario", "byproduct_totals", "compile_problem",
    "expand", "extract_plan", "leg_feasible", "load_scenario", "load_scenario_file",
    "maintenance_demand", "propellant_for_leg", "register_baseline_commodities", "replay",
    "run_sweep", "solve_lp", "solve_milp", "solve_scenario", "validate_graph",
]

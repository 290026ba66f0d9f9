"""Scenario configuration, the Earth-dependent and ISRU network builders, sweeps.

Scenario files are TOML. Every key is optional; anything left out takes the
mission baseline below. Unknown keys are rejected with their dotted path.

.. code-block:: toml

    name = "isru_baseline"
    isru_enabled = true
    horizon_years = 3
    maintenance_rate = 0.05

    [costs]
    launch_per_kg = 5000.0

    [demands]
    O2_per_year = 10000.0

    [rates.MRE]
    products = { O2 = 16.67, metals = 15.16, slag = 6.06 }

    [[sweeps]]
    name = "launch_cost"
    parameter = "launch_cost"
    values = [1000, 2500, 5000, 10000]
"""
from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .milp import compile_problem, extract_plan, solve_milp, spacecraft_commodity
from .milp.plan import Plan
from .milp.problem import MilpProblem, Solution
from .network import (
    PLANT_IDS,
    SPACECRAFT,
    WASTE_IDS,
    ArcSpec,
    ConcurrencyRow,
    Diagnostic,
    Node,
    TimeExpandedGraph,
    TimeWindow,
    expand,
    register_baseline_commodities,
    validate_graph,
)
from .transforms import (
    BASELINE_RATES,
    COMPONENTS,
    ComponentRates,
    DeltaVTable,
    PropulsionSpec,
    build_isru_q_matrix,
    inflow_nonnegativity_rows,
    propellant_capacity_row,
    propulsive_q_matrix,
)

CONSUMABLES = ("O2", "H2", "H2O")
LEG_ROLES = ("launch", "propulsive", "surface", "isru", "disposal")
SWEEP_PARAMETERS = ("launch_cost", "productivity_multiplier")
SWEEP_OUTPUTS = ("total_cost", "slag_kg", "metals_kg", "emissions_kg")


class ScenarioError(ValueError):
    """Invalid scenario content; ``path`` is the dotted key that failed."""

    def __init__(self, message: str, path: str = "", line: int | None = None, column: int | None = None):
        self.path = path
        self.line = line
        self.column = column
        where = path
        if line is not None:
            where = f"line {line}, column {column}"
        super().__init__(f"{where}: {message}" if where else message)


@dataclass(frozen=True)
class CostConfig:
    launch_per_kg: float = 5000.0
    lh2_per_kg: float = 5.97
    lo2_per_kg: float = 0.15
    spacecraft_manufacturing: float = 150e6
    spacecraft_operation_per_flight: float = 0.5e6
    mixture_ratio: float = 6.0


@dataclass(frozen=True)
class DemandConfig:
    O2_per_year: float = 10000.0
    H2O_per_year: float = 5000.0
    # explicit (node, commodity, timestep, amount) entries on top of the yearly ones
    extra: tuple = ()


@dataclass(frozen=True)
class Leg:
    origin: str
    dest: str
    role: str
    time_of_flight: int = 0

    @property
    def name(self) -> str:
        return f"{self.origin}->{self.dest}"


DEFAULT_NODES = (
    ("Earth", "earth"),
    ("LEO", "leo"),
    ("LS", "lunar_surface"),
    ("HB", "habitat"),
    ("LS_disposal", "disposal"),
)
DEFAULT_LEGS = (
    Leg("Earth", "LEO", "launch", 0),
    Leg("LEO", "LS", "propulsive", 0),
    Leg("LS", "HB", "surface", 0),
    Leg("LS", "LS", "isru", 1),
    Leg("LS", "LS_disposal", "disposal", 0),
)
DEFAULT_DELTA_V = {("LEO", "LS"): 5870.0}


@dataclass(frozen=True)
class SweepSpec:
    name: str
    parameter: str
    values: tuple
    outputs: tuple = SWEEP_OUTPUTS
    isru_enabled: bool | None = None

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ScenarioError(f"unknown sweep parameter {self.parameter!r}", f"sweeps.{self.name}.parameter")
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ScenarioError("sweep needs at least one value", f"sweeps.{self.name}.values")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ScenarioError("sweep values must be strictly increasing", f"sweeps.{self.name}.values")
        object.__setattr__(self, "values", vals)
        bad = [o for o in self.outputs if o not in SWEEP_OUTPUTS]
        if bad:
            raise ScenarioError(f"unknown sweep outputs {bad}", f"sweeps.{self.name}.outputs")


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "scenario"
    isru_enabled: bool = True
    horizon_years: int = 3
    maintenance_rate: float = 0.05
    productivity_multiplier: float = 1.0
    waste_storage_kg: float = 0.0
    costs: CostConfig = CostConfig()
    propulsion: PropulsionSpec = PropulsionSpec()
    demands: DemandConfig = DemandConfig()
    rates: dict = field(default_factory=lambda: dict(BASELINE_RATES))
    delta_v: dict = field(default_factory=lambda: dict(DEFAULT_DELTA_V))
    nodes: tuple = DEFAULT_NODES
    legs: tuple = DEFAULT_LEGS
    disposal_windows: dict = field(default_factory=dict)
    sweeps: tuple = ()

    @property
    def horizon(self) -> tuple:
        return tuple(range(self.horizon_years + 1))

    def sweep(self, name: str) -> SweepSpec:
        for s in self.sweeps:
            if s.name == name:
                return s
        raise KeyError(name)


# ---------------------------------------------------------------- loading

_LOC = re.compile(r"line (\d+), column (\d+)")


def _number(value, path: str, *, minimum: float | None = 0.0, integer: bool = False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"expected a number, got {value!r}", path)
    if integer and not float(value).is_integer():
        raise ScenarioError(f"expected an integer, got {value!r}", path)
    if not math.isfinite(value):
        raise ScenarioError("must be finite", path)
    if minimum is not None and value < minimum:
        raise ScenarioError(f"must be >= {minimum:g}, got {value!r}", path)
    return int(value) if integer else float(value)


def _table(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ScenarioError("expected a table", path)
    return value


def _reject_unknown(table: dict, allowed, path: str) -> None:
    for key in table:
        if key not in allowed:
            p = f"{path}.{key}" if path else key
            raise ScenarioError("unknown key", p)


def _numbers_section(table: dict, cls, path: str):
    defaults = cls()
    _reject_unknown(table, cls.__dataclass_fields__, path)
    kwargs = {}
    for key, val in table.items():
        kwargs[key] = _number(val, f"{path}.{key}")
    return replace(defaults, **kwargs)


def _leg_key(text: str, path: str) -> tuple:
    parts = text.split("->")
    if len(parts) != 2 or not all(p.strip() for p in parts):
        raise ScenarioError("leg keys look like 'ORIGIN->DEST'", path)
    return parts[0].strip(), parts[1].strip()


def _rates(table: dict) -> dict:
    rates = dict(BASELINE_RATES)
    for comp, spec in table.items():
        path = f"rates.{comp}"
        if comp not in COMPONENTS:
            raise ScenarioError("unknown component", path)
        spec = _table(spec, path)
        _reject_unknown(spec, ("products", "consumptions", "power"), path)
        base = rates[comp]
        products = dict(base.products)
        consumptions = dict(base.consumptions)
        if "products" in spec:
            products = {k: _number(v, f"{path}.products.{k}") for k, v in _table(spec["products"], f"{path}.products").items()}
        if "consumptions" in spec:
            consumptions = {k: _number(v, f"{path}.consumptions.{k}")
                            for k, v in _table(spec["consumptions"], f"{path}.consumptions").items()}
        power = _number(spec["power"], f"{path}.power", minimum=None) if "power" in spec else base.power
        if comp == "FSPS" and power < 0:
            raise ScenarioError("FSPS power must be >= 0", f"{path}.power")
        if comp != "FSPS" and power > 0:
            raise ScenarioError("plant power draw must be <= 0", f"{path}.power")
        rates[comp] = ComponentRates(comp, products, consumptions, power)
    return rates


def _demands(table: dict) -> DemandConfig:
    _reject_unknown(table, ("O2_per_year", "H2O_per_year", "extra"), "demands")
    kwargs = {}
    for key in ("O2_per_year", "H2O_per_year"):
        if key in table:
            kwargs[key] = _number(table[key], f"demands.{key}")
    extra = []
    for i, entry in enumerate(table.get("extra", [])):
        path = f"demands.extra[{i}]"
        entry = _table(entry, path)
        _reject_unknown(entry, ("node", "commodity", "timestep", "amount"), path)
        for key in ("node", "commodity", "timestep", "amount"):
            if key not in entry:
                raise ScenarioError("missing key", f"{path}.{key}")
        extra.append((
            str(entry["node"]), str(entry["commodity"]),
            _number(entry["timestep"], f"{path}.timestep", minimum=None, integer=True),
            _number(entry["amount"], f"{path}.amount", minimum=None),
        ))
    kwargs["extra"] = tuple(extra)
    return replace(DemandConfig(), **kwargs)


def _network(table: dict) -> tuple:
    _reject_unknown(table, ("nodes", "legs"), "network")
    nodes = DEFAULT_NODES
    legs = DEFAULT_LEGS
    if "nodes" in table:
        nodes = []
        for i, entry in enumerate(table["nodes"]):
            path = f"network.nodes[{i}]"
            entry = _table(entry, path)
            _reject_unknown(entry, ("id", "kind"), path)
            nodes.append((str(entry["id"]), str(entry["kind"])))
        nodes = tuple(nodes)
    if "legs" in table:
        legs = []
        for i, entry in enumerate(table["legs"]):
            path = f"network.legs[{i}]"
            entry = _table(entry, path)
            _reject_unknown(entry, ("from", "to", "role", "time_of_flight"), path)
            role = str(entry.get("role", ""))
            if role not in LEG_ROLES:
                raise ScenarioError(f"role must be one of {LEG_ROLES}", f"{path}.role")
            tof = _number(entry.get("time_of_flight", 1 if role == "isru" else 0),
                          f"{path}.time_of_flight", integer=True)
            legs.append(Leg(str(entry["from"]), str(entry["to"]), role, tof))
        legs = tuple(legs)
    return nodes, legs


def _sweeps(entries) -> tuple:
    out = []
    for i, entry in enumerate(entries):
        path = f"sweeps[{i}]"
        entry = _table(entry, path)
        _reject_unknown(entry, ("name", "parameter", "values", "outputs", "isru_enabled"), path)
        if "name" not in entry:
            raise ScenarioError("missing key", f"{path}.name")
        values = entry.get("values", [])
        if not isinstance(values, list):
            raise ScenarioError("expected a list", f"{path}.values")
        vals = tuple(_number(v, f"{path}.values[{k}]", minimum=None) for k, v in enumerate(values))
        iso = entry.get("isru_enabled")
        if iso is not None and not isinstance(iso, bool):
            raise ScenarioError("expected true/false", f"{path}.isru_enabled")
        out.append(SweepSpec(
            str(entry["name"]), str(entry.get("parameter", "")), vals,
            tuple(entry.get("outputs", SWEEP_OUTPUTS)), iso,
        ))
    names = [s.name for s in out]
    if len(set(names)) != len(names):
        raise ScenarioError("duplicate sweep names", "sweeps")
    return tuple(out)


TOP_KEYS = (
    "name", "isru_enabled", "horizon_years", "maintenance_rate", "productivity_multiplier",
    "waste_storage_kg", "costs", "propulsion", "demands", "rates", "delta_v", "network",
    "disposal_windows", "sweeps",
)


def load_scenario(text: str) -> ScenarioConfig:
    """Parse and validate scenario text; omitted keys take baseline values."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = _LOC.search(str(exc))
        line, col = (int(m.group(1)), int(m.group(2))) if m else (None, None)
        raise ScenarioError(str(exc).split(" (at")[0], line=line, column=col) from exc
    _reject_unknown(data, TOP_KEYS, "")
    kwargs = {}
    if "name" in data:
        kwargs["name"] = str(data["name"])
    if "isru_enabled" in data:
        if not isinstance(data["isru_enabled"], bool):
            raise ScenarioError("expected true/false", "isru_enabled")
        kwargs["isru_enabled"] = data["isru_enabled"]
    if "horizon_years" in data:
        kwargs["horizon_years"] = _number(data["horizon_years"], "horizon_years", minimum=1, integer=True)
    if "maintenance_rate" in data:
        rate = _number(data["maintenance_rate"], "maintenance_rate")
        if rate > 1:
            raise ScenarioError("must lie in [0, 1]", "maintenance_rate")
        kwargs["maintenance_rate"] = rate
    for key in ("productivity_multiplier", "waste_storage_kg"):
        if key in data:
            kwargs[key] = _number(data[key], key)
    if "costs" in data:
        kwargs["costs"] = _numbers_section(_table(data["costs"], "costs"), CostConfig, "costs")
    if "propulsion" in data:
        prop = _numbers_section(_table(data["propulsion"], "propulsion"), PropulsionSpec, "propulsion")
        if prop.isp <= 0:
            raise ScenarioError("must be > 0", "propulsion.isp")
        if prop.propellant_capacity <= 0:
            raise ScenarioError("must be > 0", "propulsion.propellant_capacity")
        kwargs["propulsion"] = prop
    if "demands" in data:
        kwargs["demands"] = _demands(_table(data["demands"], "demands"))
    if "rates" in data:
        kwargs["rates"] = _rates(_table(data["rates"], "rates"))
    if "delta_v" in data:
        dv = dict(DEFAULT_DELTA_V)
        for key, val in _table(data["delta_v"], "delta_v").items():
            dv[_leg_key(key, f"delta_v.{key}")] = _number(val, f"delta_v.{key}")
        kwargs["delta_v"] = dv
    if "network" in data:
        kwargs["nodes"], kwargs["legs"] = _network(_table(data["network"], "network"))
    if "disposal_windows" in data:
        windows = {}
        for key, val in _table(data["disposal_windows"], "disposal_windows").items():
            path = f"disposal_windows.{key}"
            _leg_key(key, path)
            if not isinstance(val, list):
                raise ScenarioError("expected a list of timesteps", path)
            windows[key] = tuple(_number(v, f"{path}[{i}]", integer=True) for i, v in enumerate(val))
        kwargs["disposal_windows"] = windows
    if "sweeps" in data:
        if not isinstance(data["sweeps"], list):
            raise ScenarioError("expected an array of tables", "sweeps")
        kwargs["sweeps"] = _sweeps(data["sweeps"])
    return ScenarioConfig(**kwargs)


SHIPPED = ("earth_baseline", "isru_baseline", "fig2_sweep", "fig3_sweep")


def shipped_scenario_text(name: str) -> str:
    return resources.files("lunarflow").joinpath("scenarios", f"{name}.toml").read_text()


def load_scenario_file(path) -> ScenarioConfig:
    """Load a scenario from ``path``, or a shipped scenario by bare name."""
    p = Path(path)
    if not p.exists() and str(path) in SHIPPED:
        return load_scenario(shipped_scenario_text(str(path)))
    return load_scenario(p.read_text())


# ---------------------------------------------------------------- building


def scenario_registry():
    return register_baseline_commodities().extended(spacecraft_commodity())


def config_diagnostics(config: ScenarioConfig) -> list[Diagnostic]:
    """Problems visible before any graph is built."""
    reg = scenario_registry()
    out = []
    for comp in COMPONENTS:
        r = config.rates[comp]
        for cid in list(r.products) + list(r.consumptions):
            if cid not in reg:
                out.append(Diagnostic("unknown-commodity", f"{comp} rate references unregistered commodity",
                                      commodity=cid))
    node_ids = {nid for nid, _ in config.nodes}
    for leg in config.legs:
        for end in (leg.origin, leg.dest):
            if end not in node_ids:
                out.append(Diagnostic("unknown-node", "leg endpoint is not a declared node", arc=leg.name, node=end))
    for (o, d) in config.delta_v:
        if o not in node_ids or d not in node_ids:
            out.append(Diagnostic("unknown-node", "delta-v entry references an undeclared node", arc=f"{o}->{d}"))
    leg_names = {leg.name for leg in config.legs if leg.role == "disposal"}
    for key in config.disposal_windows:
        if key not in leg_names:
            out.append(Diagnostic("unknown-arc", "disposal window names no disposal leg", arc=key))
    if not any(kind == "habitat" for _, kind in config.nodes):
        out.append(Diagnostic("no-habitat", "scenario declares no habitat node"))
    return out


def _liftable(isru: bool) -> tuple:
    base = ("O2", "H2", "H2O", SPACECRAFT)
    return base + (("spares",) + PLANT_IDS if isru else ())


def _only(ids, allowed) -> list:
    """Window list closing every commodity outside ``allowed``."""
    closed = [c for c in ids if c not in allowed]
    return [TimeWindow.closed(closed)] if closed else []


def build_scenario(config: ScenarioConfig):
    """Network, demands and costs for ``config`` (ISRU on or off)."""
    diags = config_diagnostics(config)
    if diags:
        raise ScenarioError("; ".join(str(d) for d in diags))
    reg = scenario_registry()
    ids = reg.ids
    horizon = config.horizon
    isru = config.isru_enabled
    costs = config.costs
    prop = config.propulsion
    liftable = _liftable(isru)
    waste = set(WASTE_IDS)

    nodes = []
    for nid, kind in config.nodes:
        clear = frozenset(WASTE_IDS + ("power",)) if kind == "lunar_surface" else frozenset()
        nodes.append(Node(nid, kind, {}, clear))
    habitat = next(n for n in nodes if n.kind == "habitat")
    mult = config.productivity_multiplier
    for t in horizon[1:]:
        for cid, amount in (("O2", config.demands.O2_per_year), ("H2O", config.demands.H2O_per_year)):
            if amount:
                habitat.demand[(cid, t)] = habitat.demand.get((cid, t), 0.0) + amount * mult
    by_id = {n.id: n for n in nodes}
    for nid, cid, t, amount in config.demands.extra:
        if nid not in by_id:
            raise ScenarioError(f"demand at unknown node {nid!r}", "demands.extra")
        node = by_id[nid]
        node.demand[(cid, t)] = node.demand.get((cid, t), 0.0) + amount

    q_isru = build_isru_q_matrix(config.rates, 1.0, config.maintenance_rate, register_baseline_commodities()).embed(ids)
    specs = []
    for leg in config.legs:
        name = leg.name
        if leg.role == "launch":
            mass = [c for c in liftable if c != SPACECRAFT]
            launch = {c: costs.launch_per_kg for c in mass}
            launch[SPACECRAFT] = prop.structure_mass * costs.launch_per_kg
            specs.append(ArcSpec(
                leg.origin, leg.dest, "transport", leg.time_of_flight,
                costs={
                    "launch": launch,
                    "propellant": {"O2": costs.lo2_per_kg, "H2": costs.lh2_per_kg},
                    "hardware": {SPACECRAFT: costs.spacecraft_manufacturing},
                },
                windows=_only(ids, liftable), role="launch", name=name,
            ))
        elif leg.role == "propulsive":
            dv = float(config.delta_v.get((leg.origin, leg.dest), 0.0))
            q = propulsive_q_matrix(reg, dv, prop, costs.mixture_ratio)
            rows = [propellant_capacity_row(reg, dv, prop)] + inflow_nonnegativity_rows(q)
            specs.append(ArcSpec(
                leg.origin, leg.dest, "transformation" if dv else "transport", leg.time_of_flight,
                costs={"operations": {SPACECRAFT: costs.spacecraft_operation_per_flight}},
                transformation=q, concurrency=rows,
                windows=_only(ids, liftable), role="propulsive", name=name,
            ))
        elif leg.role == "surface":
            specs.append(ArcSpec(leg.origin, leg.dest, "transport", leg.time_of_flight,
                                 windows=_only(ids, CONSUMABLES), role="surface", name=name))
        elif leg.role == "isru":
            allowed = () if not isru else tuple(c for c in ids if c not in ("power", SPACECRAFT))
            specs.append(ArcSpec(
                leg.origin, leg.dest, "transformation", leg.time_of_flight,
                transformation=q_isru, concurrency=inflow_nonnegativity_rows(q_isru),
                windows=_only(ids, allowed), role="isru", name=f"isru:{leg.origin}",
            ))
        elif leg.role == "disposal":
            open_t = frozenset(config.disposal_windows.get(name, horizon))
            windows = _only(ids, tuple(waste) + ("power",))
            windows.append(TimeWindow(open_t, frozenset(waste)))
            specs.append(ArcSpec(leg.origin, leg.dest, "transport", leg.time_of_flight,
                                 windows=windows, role="disposal", name=name))

    for node in nodes:
        if node.kind == "earth":
            allowed = ()
        elif node.kind == "leo":
            allowed = liftable
        elif node.kind == "disposal":
            allowed = tuple(waste) + ("power",)
        else:
            allowed = tuple(c for c in ids if c != "power")
        rows = []
        if node.kind in ("lunar_surface", "habitat"):
            rows.append(ConcurrencyRow({c: 1.0 for c in WASTE_IDS}, config.waste_storage_kg, "waste storage"))
        specs.append(ArcSpec(node.id, node.id, "holdover", 1, concurrency=rows,
                             windows=_only(ids, allowed), role="holdover"))

    graph = expand(nodes, specs, horizon, reg)
    return graph, graph.demands(), {s.name: s.costs for s in graph.specs}


def build_isru_scenario(config: ScenarioConfig):
    if not config.isru_enabled:
        raise ScenarioError("isru_enabled must be true", "isru_enabled")
    return build_scenario(config)


def build_earth_dependent_scenario(config: ScenarioConfig):
    if config.isru_enabled:
        raise ScenarioError("isru_enabled must be false", "isru_enabled")
    return build_scenario(config)


def validate_scenario(config: ScenarioConfig) -> list[Diagnostic]:
    diags = config_diagnostics(config)
    if diags:
        return diags
    graph, _, _ = build_scenario(config)
    return validate_graph(graph)


# ---------------------------------------------------------------- solving


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    graph: TimeExpandedGraph
    problem: MilpProblem
    solution: Solution
    plan: Plan
    replay: object = None

    @property
    def total_cost(self) -> float:
        return self.plan.objective


def physics_for(config: ScenarioConfig):
    from .replay import ReplayPhysics

    return ReplayPhysics(
        rates=config.rates,
        maintenance_rate=config.maintenance_rate,
        propulsion=config.propulsion,
        delta_v=DeltaVTable(config.delta_v),
        mixture_ratio=config.costs.mixture_ratio,
        timestep_years=1.0,
    )


def solve_scenario(config: ScenarioConfig, node_limit: int = 20000, replay: bool = True) -> ScenarioResult:
    from .replay import replay as run_replay

    graph, demands, costs = build_scenario(config)
    diags = validate_graph(graph)
    if diags:
        raise ScenarioError("; ".join(str(d) for d in diags))
    problem = compile_problem(graph, demands, costs)
    solution = solve_milp(problem, node_limit=node_limit)
    plan = extract_plan(solution, graph)
    result = ScenarioResult(config, graph, problem, solution, plan)
    if replay and solution.optimal:
        result.replay = run_replay(plan, graph, physics_for(config))
    return result


@dataclass
class SweepRow:
    value: float
    total_cost: float = math.nan
    slag_kg: float = math.nan
    metals_kg: float = math.nan
    emissions_kg: float = math.nan
    status: str = "optimal"
    error: str = ""


def apply_sweep_value(config: ScenarioConfig, spec: SweepSpec, value: float) -> ScenarioConfig:
    if spec.isru_enabled is not None:
        config = replace(config, isru_enabled=spec.isru_enabled)
    if spec.parameter == "launch_cost":
        return replace(config, costs=replace(config.costs, launch_per_kg=value))
    return replace(config, productivity_multiplier=value)


def _sweep_row(config: ScenarioConfig, spec: SweepSpec, value: float) -> SweepRow:
    try:
        result = solve_scenario(apply_sweep_value(config, spec, value), replay=False)
    except Exception as exc:  # recorded per row; the sweep carries on
        return SweepRow(value, status="error", error=str(exc))
    if not result.solution.optimal:
        return SweepRow(value, status=result.solution.status, error=result.solution.message)
    b = result.plan.byproducts
    return SweepRow(value, result.total_cost, b["slag"], b["metals"], b["emissions"])


def run_sweep(config: ScenarioConfig, spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Solve one scenario per sweep value; rows come back in value order."""
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda v: _sweep_row(config, spec, v), spec.values))
    else:
        rows = [_sweep_row(config, spec, v) for v in spec.values]
    return sorted(rows, key=lambda r: r.value)

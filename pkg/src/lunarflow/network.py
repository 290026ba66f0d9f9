"""Commodities, the static node/arc description, and its time expansion.

A static network is a list of :class:`Node` and :class:`ArcSpec` objects.
:func:`expand` turns it into a :class:`TimeExpandedGraph` whose arc
instances are ``(spec, departure)`` pairs; every node also gets a holdover
arc from each timestep to the next so stock can persist.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

CONTINUOUS = "continuous"
DISCRETE = "discrete"

NODE_KINDS = ("earth", "leo", "lunar_surface", "habitat", "disposal")
ARC_KINDS = ("transport", "transformation", "holdover")

BASELINE_IDS = (
    "soil", "slag", "dsoil", "spares", "O2", "H2", "H2O", "emissions",
    "metals", "excavator", "SWE", "DWE", "MRE", "power", "FSPS",
)
PLANT_IDS = ("excavator", "SWE", "DWE", "MRE", "FSPS")
WASTE_IDS = ("slag", "dsoil", "emissions", "metals")
SPACECRAFT = "spacecraft"


class GraphError(ValueError):
    """Raised when a static network cannot be expanded."""


@dataclass(frozen=True)
class Commodity:
    id: str
    kind: str = CONTINUOUS
    unit: str = "kg"

    @property
    def is_integer(self) -> bool:
        return self.kind == DISCRETE


class CommodityRegistry:
    """Ordered, immutable set of commodities; the order fixes vector layout."""

    def __init__(self, commodities: Iterable[Commodity]):
        self._items = tuple(commodities)
        self._index = {c.id: i for i, c in enumerate(self._items)}
        if len(self._index) != len(self._items):
            raise ValueError("duplicate commodity ids")

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self):
        return iter(self._items)

    def __contains__(self, cid: object) -> bool:
        return cid in self._index

    def __getitem__(self, cid: str) -> Commodity:
        return self._items[self._index[cid]]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CommodityRegistry) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        return f"CommodityRegistry({list(self.ids)})"

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self._items)

    def index(self, cid: str) -> int:
        return self._index[cid]

    def extended(self, *extra: Commodity) -> "CommodityRegistry":
        return CommodityRegistry(self._items + tuple(extra))

    def mass_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self._items if c.unit == "kg")


def register_baseline_commodities() -> CommodityRegistry:
    """The fifteen tracked flows in flow-vector order.

    Plants are sized continuously (their rates are per kg of plant), so
    every baseline commodity is continuous; ``power`` is the only kW flow.
    """
    return CommodityRegistry(
        Commodity(cid, CONTINUOUS, "kW" if cid == "power" else "kg")
        for cid in BASELINE_IDS
    )


@dataclass(frozen=True)
class TransformationMatrix:
    """Square map from an arc's outflow vector to the inflow it delivers.

    Rows and columns follow ``commodities``; ``inflow = entries @ outflow``.
    """

    entries: np.ndarray
    commodities: tuple[str, ...]

    def __post_init__(self):
        n = len(self.commodities)
        arr = np.array(self.entries, dtype=float)
        if arr.shape != (n, n):
            raise ValueError(f"transformation matrix must be {n}x{n}, got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "commodities", tuple(self.commodities))

    @classmethod
    def identity(cls, commodities: Sequence[str]) -> "TransformationMatrix":
        return cls(np.eye(len(commodities)), tuple(commodities))

    def entry(self, row: str, col: str) -> float:
        return float(self.entries[self.commodities.index(row), self.commodities.index(col)])

    def embed(self, commodities: Sequence[str]) -> "TransformationMatrix":
        """Re-lay the matrix over a larger commodity list, identity elsewhere."""
        commodities = tuple(commodities)
        if commodities == self.commodities:
            return self
        missing = set(self.commodities) - set(commodities)
        if missing:
            raise ValueError(f"cannot embed: {sorted(missing)} not in target list")
        out = np.eye(len(commodities))
        idx = [commodities.index(c) for c in self.commodities]
        out[np.ix_(idx, idx)] = self.entries
        return TransformationMatrix(out, commodities)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.entries, np.eye(len(self.commodities))))


@dataclass(frozen=True)
class ConcurrencyRow:
    """``sum(coefficients[c] * x[c]) <= bound`` on one arc instance."""

    coefficients: Mapping[str, float]
    bound: float = 0.0
    description: str = ""

    def evaluate(self, flows: Mapping[str, float]) -> float:
        return sum(w * flows.get(c, 0.0) for c, w in self.coefficients.items())


@dataclass(frozen=True)
class TimeWindow:
    """Timesteps at which ``commodities`` may depart on an arc.

    ``commodities=None`` means the window applies to every commodity.
    """

    open: frozenset
    commodities: frozenset | None = None

    def __post_init__(self):
        object.__setattr__(self, "open", frozenset(self.open))
        if self.commodities is not None:
            object.__setattr__(self, "commodities", frozenset(self.commodities))

    def restricts(self, cid: str) -> bool:
        return self.commodities is None or cid in self.commodities

    @classmethod
    def closed(cls, commodities: Iterable[str]) -> "TimeWindow":
        return cls(frozenset(), frozenset(commodities))


@dataclass
class Node:
    id: str
    kind: str
    # (commodity, timestep) -> mass; positive consumes, negative supplies
    demand: dict = field(default_factory=dict)
    # commodities that may not be left over at the final timestep
    clear_at_end: frozenset = frozenset()

    @property
    def is_source(self) -> bool:
        return self.kind == "earth"


@dataclass
class ArcSpec:
    origin: str
    dest: str
    kind: str = "transport"
    time_of_flight: int = 0
    # cost class -> commodity -> currency per unit of flow
    costs: dict = field(default_factory=dict)
    transformation: TransformationMatrix | None = None
    concurrency: list = field(default_factory=list)
    windows: list = field(default_factory=list)
    role: str = ""
    name: str = ""

    def __post_init__(self):
        if not self.name:
            self.name = f"{self.origin}->{self.dest}" if self.kind != "holdover" else f"hold:{self.origin}"
        if not self.role:
            self.role = self.kind

    def cost_vector(self, commodities: Sequence[str]) -> np.ndarray:
        vec = np.zeros(len(commodities))
        for part in self.costs.values():
            for cid, value in part.items():
                if cid in commodities:
                    vec[commodities.index(cid)] += value
        return vec

    def q_matrix(self, commodities: Sequence[str]) -> np.ndarray:
        if self.transformation is None:
            return np.eye(len(commodities))
        return self.transformation.embed(commodities).entries

    def is_open(self, cid: str, t: int) -> bool:
        return all(t in w.open for w in self.windows if w.restricts(cid))


@dataclass(frozen=True)
class ArcInstance:
    index: int
    spec: ArcSpec
    depart: int
    arrive: int

    @property
    def origin(self) -> str:
        return self.spec.origin

    @property
    def dest(self) -> str:
        return self.spec.dest

    def label(self) -> str:
        return f"{self.spec.name}@{self.depart}"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    node: str | None = None
    arc: str | None = None
    timestep: int | None = None
    commodity: str | None = None

    def __str__(self) -> str:
        where = ", ".join(
            f"{k}={v}" for k, v in (
                ("node", self.node), ("arc", self.arc),
                ("t", self.timestep), ("commodity", self.commodity),
            ) if v is not None
        )
        return f"[{self.code}] {self.message}" + (f" ({where})" if where else "")


@dataclass
class TimeExpandedGraph:
    nodes: list
    horizon: tuple
    arcs: list
    registry: CommodityRegistry
    specs: list
    diagnostics: list = field(default_factory=list)

    def __post_init__(self):
        self._node_index = {n.id: n for n in self.nodes}
        self._out: dict = {}
        self._in: dict = {}
        for arc in self.arcs:
            self._out.setdefault((arc.origin, arc.depart), []).append(arc)
            self._in.setdefault((arc.dest, arc.arrive), []).append(arc)

    @property
    def final(self) -> int:
        return self.horizon[-1]

    def node(self, nid: str) -> Node:
        return self._node_index[nid]

    def departing(self, nid: str, t: int) -> list:
        return self._out.get((nid, t), [])

    def arriving(self, nid: str, t: int) -> list:
        return self._in.get((nid, t), [])

    def holdovers(self) -> list:
        return [a for a in self.arcs if a.spec.kind == "holdover"]

    def instances_of(self, name: str) -> list:
        return [a for a in self.arcs if a.spec.name == name]

    def demands(self) -> dict:
        """Flattened ``(node, commodity, t) -> amount`` view of node demands."""
        out = {}
        for node in self.nodes:
            for (cid, t), amount in node.demand.items():
                out[(node.id, cid, t)] = amount
        return out


def expand(
    nodes: Sequence[Node],
    arcs: Sequence[ArcSpec],
    horizon: Sequence[int],
    registry: CommodityRegistry | None = None,
) -> TimeExpandedGraph:
    """Expand a static network over ``horizon``.

    Nodes that have no holdover spec among ``arcs`` get an identity one.
    An arc whose time of flight leaves it with no departure that lands
    inside the horizon is kept out of the graph and reported as a
    build diagnostic rather than dropped silently.
    """
    registry = registry or register_baseline_commodities()
    horizon = tuple(horizon)
    if not horizon:
        raise GraphError("horizon must be nonempty")
    if list(horizon) != list(range(horizon[0], horizon[0] + len(horizon))):
        raise GraphError("horizon must be consecutive integer timesteps")

    ids = [n.id for n in nodes]
    if len(set(ids)) != len(ids):
        raise GraphError("duplicate node ids")
    known = set(ids)

    specs = list(arcs)
    held = set()
    for spec in specs:
        for end in (spec.origin, spec.dest):
            if end not in known:
                raise GraphError(f"arc {spec.name!r} references unknown node {end!r}")
        if spec.kind == "holdover":
            if spec.origin in held:
                raise GraphError(f"node {spec.origin!r} has more than one holdover arc")
            held.add(spec.origin)
    for nid in ids:
        if nid not in held:
            specs.append(ArcSpec(nid, nid, "holdover", 1))

    tset = set(horizon)
    instances = []
    diagnostics = []
    for spec in specs:
        placed = 0
        for t in horizon:
            if t + spec.time_of_flight in tset:
                instances.append(ArcInstance(len(instances), spec, t, t + spec.time_of_flight))
                placed += 1
        if placed == 0 and spec.kind != "holdover":
            diagnostics.append(Diagnostic(
                "arc-beyond-horizon",
                f"time of flight {spec.time_of_flight} leaves no departure inside a "
                f"{len(horizon)}-step horizon",
                arc=spec.name,
            ))
    return TimeExpandedGraph(list(nodes), horizon, instances, registry, specs, diagnostics)


def validate_graph(graph: TimeExpandedGraph) -> list[Diagnostic]:
    """Check every structural invariant; returns one diagnostic per violation."""
    out = list(graph.diagnostics)
    reg = graph.registry
    tset = set(graph.horizon)

    seen = set()
    for node in graph.nodes:
        if node.id in seen:
            out.append(Diagnostic("duplicate-node", "node id is not unique", node=node.id))
        seen.add(node.id)
        if node.kind not in NODE_KINDS:
            out.append(Diagnostic("node-kind", f"unknown node kind {node.kind!r}", node=node.id))
        for (cid, t), amount in sorted(node.demand.items(), key=lambda kv: (str(kv[0][0]), kv[0][1])):
            if cid not in reg:
                out.append(Diagnostic("unknown-commodity", "demand references unregistered commodity",
                                      node=node.id, commodity=cid, timestep=t))
            if t not in tset:
                out.append(Diagnostic("demand-outside-horizon", "demand timestep is outside the horizon",
                                      node=node.id, commodity=cid, timestep=t))
            if not math.isfinite(amount):
                out.append(Diagnostic("demand-value", "demand is not finite",
                                      node=node.id, commodity=cid, timestep=t))
        for cid in sorted(node.clear_at_end):
            if cid not in reg:
                out.append(Diagnostic("unknown-commodity", "clear_at_end references unregistered commodity",
                                      node=node.id, commodity=cid))

    for spec in graph.specs:
        if spec.kind not in ARC_KINDS:
            out.append(Diagnostic("arc-kind", f"unknown arc kind {spec.kind!r}", arc=spec.name))
        if spec.time_of_flight < 0:
            out.append(Diagnostic("time-of-flight", "time of flight is negative", arc=spec.name))
        if spec.kind == "holdover" and (spec.origin != spec.dest or spec.time_of_flight != 1):
            out.append(Diagnostic("holdover-shape", "holdover must be a self-arc of one timestep",
                                  arc=spec.name))
        for cls, part in spec.costs.items():
            for cid, value in part.items():
                if cid not in reg:
                    out.append(Diagnostic("unknown-commodity", f"{cls} cost references unregistered commodity",
                                          arc=spec.name, commodity=cid))
                elif not (math.isfinite(value) and value >= 0):
                    out.append(Diagnostic("cost-value", f"{cls} cost must be finite and >= 0",
                                          arc=spec.name, commodity=cid))
        if spec.transformation is not None:
            q = spec.transformation
            for cid in q.commodities:
                if cid not in reg:
                    out.append(Diagnostic("unknown-commodity", "transformation references unregistered commodity",
                                          arc=spec.name, commodity=cid))
            if not np.all(np.isfinite(q.entries)):
                out.append(Diagnostic("transformation-value", "transformation has non-finite entries",
                                      arc=spec.name))
        for row in spec.concurrency:
            for cid, w in row.coefficients.items():
                if cid not in reg:
                    out.append(Diagnostic("unknown-commodity", f"concurrency row {row.description!r} "
                                          "references unregistered commodity", arc=spec.name, commodity=cid))
                elif not math.isfinite(w):
                    out.append(Diagnostic("concurrency-value", "concurrency coefficient is not finite",
                                          arc=spec.name, commodity=cid))
        for window in spec.windows:
            outside = sorted(window.open - tset)
            if outside:
                out.append(Diagnostic("window-outside-horizon", f"window opens at {outside} outside the horizon",
                                      arc=spec.name, timestep=outside[0]))
            for cid in sorted(window.commodities or ()):
                if cid not in reg:
                    out.append(Diagnostic("unknown-commodity", "window references unregistered commodity",
                                          arc=spec.name, commodity=cid))

    counts: dict = {}
    for arc in graph.holdovers():
        counts[(arc.origin, arc.depart)] = counts.get((arc.origin, arc.depart), 0) + 1
    for node in graph.nodes:
        for t in graph.horizon[:-1]:
            if counts.get((node.id, t), 0) != 1:
                out.append(Diagnostic("holdover-count", "expected exactly one holdover arc",
                                      node=node.id, timestep=t))
    for arc in graph.arcs:
        if arc.arrive not in tset or arc.depart not in tset:
            out.append(Diagnostic("arrival-outside-horizon", "arc instance leaves the horizon",
                                  arc=arc.spec.name, timestep=arc.depart))
    return out

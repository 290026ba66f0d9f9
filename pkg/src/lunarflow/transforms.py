"""ISRU plant rates and propulsive burns expressed as arc transformations.

Plant rates are per kg of deployed plant per year. A transformation arc
carrying a plant vector ``x`` for one timestep delivers
``inflow = Q @ x``: products appear at ``+alpha``, feedstock is drawn at
``-beta`` and the power row nets plant draw against FSPS output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .network import (
    BASELINE_IDS,
    SPACECRAFT,
    CommodityRegistry,
    ConcurrencyRow,
    TransformationMatrix,
    register_baseline_commodities,
)

G0 = 9.80665

COMPONENTS = ("MRE", "SWE", "DWE", "excavator", "FSPS")

# reporting-only breakdowns of aggregated commodities
METAL_SPLIT = {"Si": 7.43, "Fe": 3.71, "Al": 2.08, "Ti": 1.94}
EMISSION_SPECIES = ("H2S", "NH3", "SO2", "C2H4", "CO2", "CH3OH", "CH4", "OH")


@dataclass(frozen=True)
class ComponentRates:
    """Per-kg-plant annual yields, feedstock draw and power for one plant type.

    ``power`` is signed: negative consumes kW, positive generates.
    """

    component: str
    products: Mapping[str, float] = field(default_factory=dict)
    consumptions: Mapping[str, float] = field(default_factory=dict)
    power: float = 0.0

    def scaled(self, k: float) -> "ComponentRates":
        return ComponentRates(
            self.component,
            {c: k * v for c, v in self.products.items()},
            {c: k * v for c, v in self.consumptions.items()},
            k * self.power,
        )


BASELINE_RATES = {
    "MRE": ComponentRates("MRE", {"O2": 16.67, "metals": 15.16, "slag": 6.06}, {"dsoil": 37.89}, -0.0942),
    "SWE": ComponentRates("SWE", {"H2O": 10.50, "dsoil": 173.48, "emissions": 3.52}, {"soil": 187.5}, -0.0359),
    "DWE": ComponentRates("DWE", {"O2": 31.12, "H2": 3.88}, {"H2O": 35.0}, -0.0700),
    "excavator": ComponentRates("excavator", {"soil": 333.33}, {}, -0.00113),
    "FSPS": ComponentRates("FSPS", {}, {}, 0.00667),
}


@dataclass(frozen=True)
class PropulsionSpec:
    isp: float = 420.0
    structure_mass: float = 6000.0
    propellant_capacity: float = 65000.0
    g0: float = G0

    @property
    def exhaust_velocity(self) -> float:
        return self.isp * self.g0


class DeltaVTable(dict):
    """``(origin, dest) -> delta-v`` in m/s; legs not listed are unpowered."""

    def leg(self, origin: str, dest: str) -> float:
        return float(self.get((origin, dest), 0.0))


def build_isru_q_matrix(
    rates: Mapping[str, ComponentRates],
    timestep_length: float = 1.0,
    maintenance_rate: float = 0.0,
    registry: CommodityRegistry | None = None,
) -> TransformationMatrix:
    """Assemble the surface transformation matrix from plant rate tables.

    Parameters
    ----------
    rates : mapping
        One :class:`ComponentRates` per entry of ``COMPONENTS``.
    timestep_length : float
        Years per timestep. Mass yields scale with it; power does not,
        since kW is a rate rather than an accumulated quantity.
    maintenance_rate : float
        Fraction of each plant's mass drawn from ``spares`` per year.
        Zero reproduces the bare matrix with an identity spares row.
    registry : CommodityRegistry, optional
        Commodity layout; defaults to the fifteen baseline flows.
    """
    registry = registry or register_baseline_commodities()
    if timestep_length <= 0:
        raise ValueError("timestep_length must be positive")
    missing = [c for c in COMPONENTS if c not in rates]
    if missing:
        raise ValueError(f"missing component rates: {missing}")
    ids = registry.ids
    for needed in COMPONENTS + ("power", "spares"):
        if needed not in registry:
            raise ValueError(f"commodity {needed!r} not registered")

    q = np.eye(len(ids))
    pw = registry.index("power")
    for comp in COMPONENTS:
        r = rates[comp]
        col = registry.index(comp)
        for cid, alpha in r.products.items():
            if cid not in registry:
                raise ValueError(f"{comp} produces unregistered commodity {cid!r}")
            q[registry.index(cid), col] += alpha * timestep_length
        for cid, beta in r.consumptions.items():
            if cid not in registry:
                raise ValueError(f"{comp} consumes unregistered commodity {cid!r}")
            q[registry.index(cid), col] -= beta * timestep_length
        q[pw, col] += r.power
        if maintenance_rate:
            q[registry.index("spares"), col] -= maintenance_rate * timestep_length
    return TransformationMatrix(q, ids)


def propellant_for_leg(deltav: float, delivered_mass: float, spec: PropulsionSpec) -> float:
    """Propellant burned to push ``delivered_mass`` (final mass) through ``deltav``."""
    if deltav < 0 or delivered_mass < 0:
        raise ValueError("deltav and delivered_mass must be nonnegative")
    return delivered_mass * math.expm1(deltav / spec.exhaust_velocity)


def leg_feasible(propellant: float, spec: PropulsionSpec) -> bool:
    return propellant <= spec.propellant_capacity


def maintenance_demand(deployed_plant_mass: float, rate: float, years: int) -> float:
    if not 0.0 <= rate <= 1.0:
        raise ValueError("maintenance rate must lie in [0, 1]")
    return deployed_plant_mass * rate * years


def mixture_split(mixture_ratio: float) -> tuple[float, float]:
    """Mass fractions ``(O2, H2)`` of propellant at oxidizer:fuel ``mixture_ratio``."""
    if mixture_ratio < 0:
        raise ValueError("mixture ratio must be nonnegative")
    return mixture_ratio / (1.0 + mixture_ratio), 1.0 / (1.0 + mixture_ratio)


def burn_fraction(deltav: float, spec: PropulsionSpec) -> float:
    """Share of initial mass (departing flow plus structure) burned on a leg."""
    k = math.expm1(deltav / spec.exhaust_velocity)
    return k / (1.0 + k)


def propulsive_q_matrix(
    registry: CommodityRegistry,
    deltav: float,
    spec: PropulsionSpec,
    mixture_ratio: float,
) -> TransformationMatrix:
    """Transformation for a powered leg that burns carried LO2/LH2.

    Every kg leaving (cargo and propellant alike) plus the structure of each
    flown spacecraft sets the burn, which is drawn from the O2 and H2 rows.
    """
    ids = registry.ids
    q = np.eye(len(ids))
    b = burn_fraction(deltav, spec)
    f_ox, f_fuel = mixture_split(mixture_ratio)
    rows = (registry.index("O2"), registry.index("H2"))
    for cid in registry.mass_ids():
        col = registry.index(cid)
        q[rows[0], col] -= f_ox * b
        q[rows[1], col] -= f_fuel * b
    if SPACECRAFT in registry:
        col = registry.index(SPACECRAFT)
        q[rows[0], col] -= f_ox * b * spec.structure_mass
        q[rows[1], col] -= f_fuel * b * spec.structure_mass
    return TransformationMatrix(q, ids)


def propellant_capacity_row(
    registry: CommodityRegistry, deltav: float, spec: PropulsionSpec
) -> ConcurrencyRow:
    """Burn on the leg must fit in the tanks of the spacecraft flown."""
    b = burn_fraction(deltav, spec)
    coeffs = {cid: b for cid in registry.mass_ids()}
    coeffs[SPACECRAFT] = b * spec.structure_mass - spec.propellant_capacity
    return ConcurrencyRow(coeffs, 0.0, "propellant capacity")


def inflow_nonnegativity_rows(q: TransformationMatrix) -> list[ConcurrencyRow]:
    """``-(Q x)_c <= 0`` for each row of ``q`` that can draw a commodity down."""
    rows = []
    for r, cid in enumerate(q.commodities):
        line = q.entries[r]
        if np.any(np.delete(line, r) < 0) or line[r] < 1.0:
            coeffs = {q.commodities[j]: -float(w) for j, w in enumerate(line) if w != 0.0}
            rows.append(ConcurrencyRow(coeffs, 0.0, f"nonnegative {cid} inflow"))
    return rows


def plant_power_draw(mass: float, rates: ComponentRates) -> float:
    return abs(rates.power) * mass


def closed_form_sizing(
    o2_per_year: float,
    h2o_per_year: float,
    rates: Mapping[str, ComponentRates] = BASELINE_RATES,
) -> dict:
    """Plant masses for the MRE-for-oxygen, SWE-for-water split.

    Independent of the optimizer; used to cross-check sizing.
    """
    mre = o2_per_year / rates["MRE"].products["O2"]
    swe = h2o_per_year / rates["SWE"].products["H2O"]
    soil = swe * rates["SWE"].consumptions["soil"]
    excavator = soil / rates["excavator"].products["soil"]
    draw = sum(abs(rates[c].power) * m for c, m in (("MRE", mre), ("SWE", swe), ("excavator", excavator)))
    fsps = draw / rates["FSPS"].power
    return {"MRE": mre, "SWE": swe, "DWE": 0.0, "excavator": excavator, "FSPS": fsps, "power_kW": draw}


__all__ = [
    "BASELINE_IDS", "BASELINE_RATES", "COMPONENTS", "ComponentRates", "DeltaVTable", "G0",
    "METAL_SPLIT", "EMISSION_SPECIES", "PropulsionSpec", "build_isru_q_matrix", "burn_fraction",
    "closed_form_sizing", "inflow_nonnegativity_rows", "leg_feasible", "maintenance_demand",
    "mixture_split", "plant_power_draw", "propellant_capacity_row", "propellant_for_leg",
    "propulsive_q_matrix",
]

import pytest

from lunarflow.network import ArcSpec, Commodity, CommodityRegistry, Node, expand
from lunarflow.replay import byproduct_totals, compare_ledgers, replay
from lunarflow.scenario import physics_for


def test_baseline_isru_passes(isru_result):
    rep = isru_result.replay
    assert rep.passed, rep.first_violation
    assert rep.verdict == "pass"
    assert compare_ledgers(isru_result.plan.ledger, rep.ledger) == []


def test_baseline_earth_passes(earth_result):
    assert earth_result.replay.passed
    assert compare_ledgers(earth_result.plan.ledger, earth_result.replay.ledger) == []
    assert byproduct_totals(earth_result.replay.ledger) == {
        "slag": 0.0, "metals": 0.0, "emissions": 0.0, "dsoil_surplus": 0.0,
    }


def test_byproduct_totals(isru_result):
    b = byproduct_totals(isru_result.replay.ledger)
    assert b["slag"] == pytest.approx(3 * 10000 * 6.06 / 16.67, rel=1e-9)
    assert b["metals"] == pytest.approx(3 * 10000 * 15.16 / 16.67, rel=1e-9)
    assert b["emissions"] == pytest.approx(3 * 5000 * 3.52 / 10.5, rel=1e-9)
    assert b == pytest.approx(isru_result.plan.byproducts, rel=1e-9)


def test_power_balance_each_step(isru_result):
    power = isru_result.replay.ledger.power
    assert sorted(power) == [("LS", 0), ("LS", 1), ("LS", 2)]
    for draw, supply in power.values():
        assert draw == pytest.approx(supply, rel=1e-9)
        assert draw == pytest.approx(73.9066, rel=1e-5)


def perturbed(result, arc_name, cid, delta):
    flows = dict(result.plan.flows)
    arc = next(a for a in result.graph.arcs if a.spec.name == arc_name and (a.index, cid) in flows)
    flows[(arc.index, cid)] += delta
    return flows, arc


def test_plus_one_kg_fails_locally(isru_result):
    flows, arc = perturbed(isru_result, "LS->HB", "H2O", 1.0)
    rep = replay(flows, isru_result.graph, physics_for(isru_result.config))
    assert not rep.passed
    v = rep.first_violation
    assert v.timestep == arc.depart
    assert v.commodity == "H2O"
    assert v.node in ("LS", "HB")


def test_plant_perturbation_breaks_power(isru_result):
    flows, arc = perturbed(isru_result, "isru:LS", "MRE", 1.0)
    rep = replay(flows, isru_result.graph, physics_for(isru_result.config))
    checks = {v.check for v in rep.violations}
    assert "power" in checks


def test_closed_window_flow_is_flagged(earth_result):
    graph = earth_result.graph
    flows = dict(earth_result.plan.flows)
    isru = graph.instances_of("isru:LS")[0]
    flows[(isru.index, "MRE")] = 1e-3
    rep = replay(flows, graph, physics_for(earth_result.config))
    assert any(v.check == "window" for v in rep.violations)


def test_empty_plan_zero_demand_passes():
    reg = CommodityRegistry([Commodity("cargo")])
    g = expand([Node("A", "lunar_surface"), Node("B", "habitat")], [ArcSpec("A", "B")], [0, 1, 2], reg)
    rep = replay({}, g, None)
    assert rep.passed
    assert all(v == 0.0 for v in rep.ledger.stocks.values())


def test_unmet_demand_reports_node():
    reg = CommodityRegistry([Commodity("cargo")])
    g = expand([Node("A", "lunar_surface"), Node("B", "habitat", {("cargo", 1): 3.0})],
               [ArcSpec("A", "B")], [0, 1], reg)
    rep = replay({}, g, None)
    v = rep.first_violation
    assert (v.check, v.node, v.commodity, v.timestep) == ("demand", "B", "cargo", 1)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lunarflow.network import (
    ArcSpec,
    ConcurrencyRow,
    GraphError,
    Node,
    TimeWindow,
    TransformationMatrix,
    expand,
    register_baseline_commodities,
    validate_graph,
)
from lunarflow.scenario import ScenarioConfig, build_scenario


def test_registry_has_fifteen_commodities():
    reg = register_baseline_commodities()
    assert len(reg) == 15
    assert len(set(reg.ids)) == 15
    assert reg["power"].unit == "kW"
    assert all(reg[c].unit == "kg" for c in reg.ids if c != "power")


def test_registry_lookup():
    reg = register_baseline_commodities()
    assert reg["O2"].kind == "continuous"
    assert reg["O2"].unit == "kg"
    assert reg["FSPS"].unit == "kg"
    with pytest.raises(KeyError):
        reg["unobtainium"]


def test_registry_rejects_duplicates():
    reg = register_baseline_commodities()
    with pytest.raises(ValueError):
        reg.extended(reg["O2"])


def four_nodes():
    return [Node("Earth", "earth"), Node("LEO", "leo"), Node("LS", "lunar_surface"), Node("HB", "habitat")]


def test_single_timestep_has_no_arcs():
    g = expand(four_nodes(), [], [0])
    assert g.arcs == []
    assert g.holdovers() == []


def test_two_node_toy_counts():
    nodes = [Node("A", "lunar_surface"), Node("B", "habitat")]
    g = expand(nodes, [ArcSpec("A", "B", time_of_flight=1)], [0, 1])
    transport = [a for a in g.arcs if a.spec.kind != "holdover"]
    assert len(transport) == 1
    assert (transport[0].depart, transport[0].arrive) == (0, 1)
    assert len(g.holdovers()) == 2


def test_baseline_arc_set_counts():
    # 4 yearly steps {0..3}: zero-flight legs depart at every step, the
    # one-year ISRU arc at three of them, and each node holds over three times
    arcs = [
        ArcSpec("Earth", "LEO"),
        ArcSpec("LEO", "LS"),
        ArcSpec("LS", "HB"),
        ArcSpec("LS", "LS", "transformation", 1),
    ]
    g = expand(four_nodes(), arcs, range(4))
    per_spec = {}
    for a in g.arcs:
        per_spec[a.spec.name] = per_spec.get(a.spec.name, 0) + 1
    assert per_spec == {
        "Earth->LEO": 4, "LEO->LS": 4, "LS->HB": 4, "LS->LS": 3,
        "hold:Earth": 3, "hold:LEO": 3, "hold:LS": 3, "hold:HB": 3,
    }
    assert len(g.arcs) == 27


def test_baseline_scenario_counts():
    graph, _, _ = build_scenario(ScenarioConfig())
    roles = {}
    for a in graph.arcs:
        roles[a.spec.role] = roles.get(a.spec.role, 0) + 1
    assert roles == {"launch": 4, "propulsive": 4, "surface": 4, "isru": 3, "disposal": 4, "holdover": 15}


def test_arc_past_horizon_is_reported():
    nodes = [Node("A", "lunar_surface"), Node("B", "habitat")]
    g = expand(nodes, [ArcSpec("A", "B", time_of_flight=5)], [0, 1, 2])
    assert [d.code for d in g.diagnostics] == ["arc-beyond-horizon"]
    assert [d.code for d in validate_graph(g)] == ["arc-beyond-horizon"]


def test_expand_rejects_bad_input():
    nodes = [Node("A", "lunar_surface")]
    with pytest.raises(GraphError):
        expand(nodes, [ArcSpec("A", "Z")], [0, 1])
    with pytest.raises(GraphError):
        expand(nodes, [], [0, 2])
    with pytest.raises(GraphError):
        expand(nodes, [ArcSpec("A", "A", "holdover", 1), ArcSpec("A", "A", "holdover", 1)], [0, 1])


def test_validate_baseline_is_clean():
    graph, _, _ = build_scenario(ScenarioConfig())
    assert validate_graph(graph) == []


def test_validate_unknown_cost_commodity():
    nodes = [Node("A", "lunar_surface"), Node("B", "habitat")]
    g = expand(nodes, [ArcSpec("A", "B", costs={"launch": {"kryptonite": 1.0}})], [0, 1])
    diags = validate_graph(g)
    assert len(diags) == 1
    assert diags[0].code == "unknown-commodity"
    assert diags[0].commodity == "kryptonite"


def test_validate_demand_outside_horizon():
    nodes = [Node("A", "lunar_surface"), Node("B", "habitat", {("O2", 9): 5.0})]
    g = expand(nodes, [ArcSpec("A", "B")], [0, 1])
    diags = validate_graph(g)
    assert [d.code for d in diags] == ["demand-outside-horizon"]


def test_validate_negative_cost_and_bad_holdover():
    nodes = [Node("A", "lunar_surface"), Node("B", "habitat")]
    g = expand(nodes, [ArcSpec("A", "B", costs={"launch": {"O2": -1.0}}),
                       ArcSpec("A", "B", "holdover", 1)], [0, 1])
    codes = sorted(d.code for d in validate_graph(g))
    assert "cost-value" in codes
    assert "holdover-shape" in codes


def test_window_closes_commodity():
    spec = ArcSpec("A", "B", windows=[TimeWindow({1}, {"slag"})])
    assert spec.is_open("slag", 1)
    assert not spec.is_open("slag", 0)
    assert spec.is_open("O2", 0)


def test_transformation_shape_checked():
    with pytest.raises(ValueError):
        TransformationMatrix(np.eye(2), ("a", "b", "c"))


def test_concurrency_row_evaluates():
    row = ConcurrencyRow({"O2": 2.0, "H2": -1.0}, 3.0)
    assert row.evaluate({"O2": 1.5, "H2": 1.0}) == 2.0


@settings(max_examples=40, deadline=None)
@given(
    n_steps=st.integers(1, 6),
    flights=st.lists(st.integers(0, 4), min_size=0, max_size=4),
)
def test_instance_count_matches_enumeration(n_steps, flights):
    nodes = [Node("A", "lunar_surface"), Node("B", "habitat")]
    arcs = [ArcSpec("A", "B", time_of_flight=dt, name=f"a{k}") for k, dt in enumerate(flights)]
    g = expand(nodes, arcs, range(n_steps))
    expected = sum(max(0, n_steps - dt) for dt in flights) + 2 * (n_steps - 1)
    assert len(g.arcs) == expected
    for a in g.arcs:
        assert a.arrive == a.depart + a.spec.time_of_flight
        assert 0 <= a.depart and a.arrive < n_steps

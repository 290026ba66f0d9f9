"""
Byproducts against habitat demand
=================================

Scale the habitat's O2 and H2O demand and track what ISRU leaves behind.
The model is linear, so byproducts scale exactly with demand.
"""

from lunarflow.scenario import load_scenario_file, run_sweep

cfg = load_scenario_file("fig3_sweep")
rows = run_sweep(cfg, cfg.sweep("productivity"))
base = next(r for r in rows if r.value == 1.0)

print("  x     slag kg    metals kg  emissions kg    cost $M")
for r in rows:
    print(f"{r.value:4.1f} {r.slag_kg:10,.1f} {r.metals_kg:12,.1f} {r.emissions_kg:12,.1f} "
          f"{r.total_cost / 1e6:10,.1f}")
    assert abs(r.slag_kg - r.value * base.slag_kg) <= 1e-9 * r.slag_kg

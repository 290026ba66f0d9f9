"""
Launch cost sensitivity
=======================

Sweep the Earth launch price and watch the two strategies diverge.
The table is what a plot of mission cost against launch cost would show.
"""

from lunarflow.scenario import load_scenario_file, run_sweep

cfg = load_scenario_file("fig2_sweep")
earth = run_sweep(cfg, cfg.sweep("launch_cost_earth"))
isru = run_sweep(cfg, cfg.sweep("launch_cost_isru"))

print(" $/kg      earth $M     isru $M   ratio")
for e, i in zip(earth, isru):
    print(f"{e.value:6.0f} {e.total_cost / 1e6:12,.1f} {i.total_cost / 1e6:11,.1f} "
          f"{e.total_cost / i.total_cost:7.2f}")

# cost per extra $/kg of launch price
for name, rows in (("earth", earth), ("isru", isru)):
    slope = (rows[-1].total_cost - rows[0].total_cost) / (rows[-1].value - rows[0].value)
    print(f"{name}: {slope:,.0f} $ per $/kg")

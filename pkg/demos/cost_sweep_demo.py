"""Sweep the delay price, compare the three methods and write the CSVs.

Reproduces the headline comparison: as the delay price grows, remote tiers
charge more; fixing every price at the maximum discourages offloading;
skipping bandwidth optimization shifts cost between tiers.
"""
from ntn_offload.cli import write_reports
from ntn_offload.orchestrator import run_sweep
from ntn_offload.scenario import default_scenario

GRID = [10.0, 100.0, 1_000.0, 10_000.0, 100_000.0]

scn = default_scenario()
res = run_sweep(scn, GRID, n_snapshots=20)

print(f"{'c_tau':>8} {'method':>11} {'offl':>5} {'GD pays':>12} {'edge nets':>12} {'cloud nets':>12}")
for cell in res.cells:
    print(
        f"{cell.c_tau:>8g} {cell.method:>11} {cell.offload_count_mean:>5.1f} "
        f"{cell.real_cost_mean['gd']:>12.2f} {cell.real_cost_mean['mec']:>12.2f} "
        f"{cell.real_cost_mean['mcc']:>12.2f}"
    )

print("\nplacement fractions at c_tau = 1000 (proposed):")
cell = next(c for c in res.cells if c.c_tau == 1000.0 and c.method == "proposed")
for (cls, place), frac in sorted(cell.placement_fraction.items()):
    if frac > 0:
        print(f"  {cls:>7} -> {place:<6} {frac:.2f}")

paths = write_reports(res, "out/sweep_demo", scn, ["command: sweep (demo)"])
print("\nwrote:")
for p in paths:
    print(f"  {p}")

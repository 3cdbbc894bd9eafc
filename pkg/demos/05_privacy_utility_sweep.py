"""The full privacy-utility trade-off across transmit power.

Runs a reduced Monte Carlo sweep (25 trajectories) over all five sharing
schemes, prints the trend table behind the evaluation figures, and writes
the per-panel plot CSVs into demos/out/.
"""

import dataclasses
from pathlib import Path

from fidshare import run_sweep, emit_plot_data
from fidshare.config import SimConfig, SweepConfig

cfg = dataclasses.replace(SimConfig(), sweep=SweepConfig(n_trajectories=25))
result = run_sweep(cfg, master_seed=20260811)

print("mean privacy leak ratio (PLR)")
print("  ptx | " + " | ".join(f"{lab:>9s}" for lab in result.labels))
for p in result.ptx_grid:
    row = " | ".join(f"{result.cell(p, lab).mean['plr']:9.3f}" for lab in result.labels)
    print(f"  {p:3.0f} | {row}")

print("\nmean one-second-ahead position error (m), constant-velocity predictor")
print("  ptx | " + " | ".join(f"{lab:>9s}" for lab in result.labels))
for p in result.ptx_grid:
    row = " | ".join(
        f"{result.cell(p, lab).mean['pos_err_1s_m']:9.2f}" for lab in result.labels
    )
    print(f"  {p:3.0f} | {row}")

out_dir = Path(__file__).parent / "out"
files = emit_plot_data(result, out_dir)
print(f"\nwrote {len(files)} figure CSVs to {out_dir}/ (ptx_dbm, scheme, mean, stderr)")
print("Fixed noise either does nothing (0.1 m) or wrecks utility (0.7 m);")
print("the information threshold adapts: quiet at low power, bounded leakage at high power.")

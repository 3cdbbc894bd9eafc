"""A smoothing adversary against protected and unprotected sharing.

Reconstructs the trajectory with a 7-point moving average and scores the
privacy leak ratio and the leaked-run durations, comparing the
information-thresholded scheme against releasing raw measurements.
"""

import numpy as np

from fidshare import leakage_report, reconstruct_smooth, reconstruction_error, synth_trajectory
from fidshare.config import SimConfig
from fidshare.harness import RunSpec, _apply_scheme, _sense_cell

cfg = SimConfig()
traj = synth_trajectory(rng_seed=21, duration_s=40.0)
eps = cfg.privacy.epsilon_m
print(f"leak threshold: reconstruction within {eps} m of ground truth\n")

for ptx in (25.0, 45.0):
    cell = _sense_cell(traj, ptx, cfg, master_seed=2)
    truth = cell.truth_at_updates
    for scheme_kwargs, title in (
        ({"scheme": "none"}, "raw measurements"),
        ({"scheme": "fid_constrained", "eta": 50.0}, "threshold eta=50"),
    ):
        spec = RunSpec(ptx_dbm=ptx, master_seed=2, **scheme_kwargs)
        shared = _apply_scheme(cell, spec, cfg, traj.id)
        recon = reconstruct_smooth(shared, cfg.privacy.attack_window)
        errors = reconstruction_error(recon, truth)
        rep = leakage_report(errors, cell.times, eps)
        print(f"P_tx {ptx:4.1f} dBm, {title:18s}: PLR {rep.plr:5.1%}, "
              f"{len(rep.segments)} leak runs, longest {rep.max_leak_s:.2f} s, "
              f"median recon error {np.median(errors):.2f} m")
    print()

print("Raw sharing leaks more as power grows; the thresholded scheme keeps")
print("the leak ratio and run durations bounded by injecting saturating noise")
print("exactly where the sensing data became too informative.")

"""Opportunistic sensing and the Fisher information density it deposits.

One pedestrian is sensed at three transmit powers.  The demo shows the
epoch-rescheduled update rate, the per-update accuracy floor (reciprocal
Fisher information), and the piecewise information density the sharing
mechanism will threshold.
"""

import dataclasses

import numpy as np

from fidshare import accumulate, average_rate, fid_piecewise, sense_trajectory, synth_trajectory
from fidshare.config import SimConfig
from fidshare.fid import default_window_start
from fidshare.harness import derive_rng

cfg = SimConfig()
traj = synth_trajectory(rng_seed=3, duration_s=30.0)
bs = np.asarray(cfg.sensing.bs_position)
dist = np.linalg.norm(traj.xy - bs, axis=1)
print(f"trajectory: {traj.duration:.0f} s, distance to BS {dist.min():.0f}-{dist.max():.0f} m\n")

for ptx in (15.0, 30.0, 45.0):
    sensing_cfg = dataclasses.replace(cfg.sensing, ptx_avg_dbm=ptx)
    updates = sense_trajectory(traj, sensing_cfg, derive_rng(42, "demo", traj.id, ptx))
    times = np.array([u.t for u in updates])
    info = np.array([u.fisher_info for u in updates])
    crb_rmse = np.sqrt(1.0 / info)
    rate = len(updates) / traj.duration
    los_share = np.mean([u.channel.is_los for u in updates])

    series = fid_piecewise(updates, default_window_start(times))
    print(f"P_tx = {ptx:4.1f} dBm: {len(updates)} updates ({rate:.2f}/s), "
          f"LOS share {los_share:.0%}")
    print(f"  accuracy floor rmse: median {np.median(crb_rmse):6.3f} m, "
          f"best {crb_rmse.min():6.3f} m, worst {crb_rmse.max():6.3f} m")
    print(f"  information density J: median {np.median(series.values):8.1f}, "
          f"q90 {np.quantile(series.values, 0.9):8.1f} 1/(m^2 s)")
    print(f"  accumulated information {accumulate(updates):9.1f} 1/m^2, "
          f"average rate {average_rate(updates, traj.duration):8.1f} 1/(m^2 s)\n")

print("Doubling transmit power doubles every update's Fisher information;")
print("blockage epochs (5 s) and Rician fading modulate it around the distance trend.")

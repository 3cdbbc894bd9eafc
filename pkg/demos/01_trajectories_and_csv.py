"""Trajectory sources and the CSV interchange formats.

Generates a synthetic pedestrian corpus, shows the duration filter on an
ETH/UCY-style annotation snippet, normalizes raw coordinates into the
scene, and round-trips everything through the `truth` CSV schema.
"""

import io

import numpy as np

from fidshare import (
    OpenTrajFormat,
    normalize_scene,
    parse_opentraj,
    read_csv,
    synth_corpus,
    synth_trajectory,
)
from fidshare.config import SceneConfig
from fidshare.trajectory_io import trajectories_to_records, write_csv

scene = SceneConfig()

print("== Synthetic random-waypoint pedestrians ==")
traj = synth_trajectory(rng_seed=1, duration_s=20.0)
speeds = np.linalg.norm(np.diff(traj.xy, axis=0), axis=1) / np.diff(traj.t)
print(f"one 20 s trajectory: {traj.t.size} points at 10 Hz, "
      f"speeds {speeds.min():.2f}-{speeds.max():.2f} m/s, "
      f"x in [{traj.xy[:,0].min():.1f}, {traj.xy[:,0].max():.1f}] m")

corpus = synth_corpus(5, master_seed=7)
print(f"corpus of {len(corpus)} trajectories, durations: "
      + ", ".join(f"{t.duration:.0f} s" for t in corpus))

print("\n== Parsing annotation text (frame, agent, x, y) ==")
annotation = "\n".join(
    [f"{6 * k} 12 {0.3 * k:.2f} {0.1 * k:.2f}" for k in range(40)]   # ~94 s: kept
    + [f"{2 * k} 99 {k:.1f} 0.0" for k in range(10)]                 # ~7 s: dropped
)
result = parse_opentraj(annotation.encode(), OpenTrajFormat(frame_rate=2.5))
print(f"kept {len(result.trajectories)} trajectories, "
      f"dropped {result.dropped_count} outside the 10-100 s window")

normalized = normalize_scene(result.trajectories, scene.bbox)
before = result.trajectories[0].xy.max(axis=0)
after = normalized[0].xy.max(axis=0)
print(f"scene normalization: max coords {before.round(1)} -> {after.round(1)} "
      f"(uniform scale into {scene.bbox})")

print("\n== CSV round trip ==")
buf = io.StringIO()
write_csv(trajectories_to_records(corpus), "truth", buf)
buf.seek(0)
records = read_csv(buf, "truth")
print(f"wrote and re-read {len(records)} truth rows; first row: {records[0]}")

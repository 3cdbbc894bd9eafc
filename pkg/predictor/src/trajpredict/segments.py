"""Training-segment extraction from trajectory CSVs.

Trajectory rows (truth or shared CSVs) are cut into sliding fixed-length
windows, resampled to a uniform grid, and paired with the position one
second past the window end.  Inputs and targets stay in scene
coordinates; standardization happens at training time with statistics
stored in the model artifact.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


@dataclass
class SegmentSet:
    """Batched (window, target) pairs plus their provenance."""

    inputs: np.ndarray    # (n, steps, 2)
    targets: np.ndarray   # (n, 2)
    traj_ids: list[str]

    def __len__(self):
        return self.inputs.shape[0]


def read_trajectory_csv(path) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Read a truth or shared CSV into {traj_id: (t, xy)} in file order.

    Only the traj_id, t, x and y columns are used, so both schemas load
    through the same code path.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        needed = {"traj_id", "t", "x", "y"}
        if not needed.issubset(reader.fieldnames or ()):
            raise ValueError(f"{path}: expected columns {sorted(needed)}, got {reader.fieldnames}")
        grouped: dict[str, list] = {}
        for row in reader:
            grouped.setdefault(row["traj_id"], []).append((float(row["t"]), float(row["x"]), float(row["y"])))
    out = {}
    for tid, rows in grouped.items():
        arr = np.asarray(rows, dtype=float)
        order = np.argsort(arr[:, 0], kind="stable")
        arr = arr[order]
        out[tid] = (arr[:, 0], arr[:, 1:])
    return out


def resample_window(t: np.ndarray, xy: np.ndarray, t_end: float,
                    window_s: float, grid_hz: float) -> np.ndarray:
    """History window ending at ``t_end``, on a uniform grid.

    Steps before the trajectory's first sample are filled with the
    earliest position (left padding), so short histories still produce a
    full-length window.
    """
    steps = int(round(window_s * grid_hz))
    grid = t_end - (np.arange(steps - 1, -1, -1) / grid_hz)
    x = np.interp(grid, t, xy[:, 0])
    y = np.interp(grid, t, xy[:, 1])
    return np.column_stack([x, y])


def make_segments(
    trajectories: dict[str, tuple[np.ndarray, np.ndarray]],
    segment_len_s: float = 12.0,
    horizon_s: float = 1.0,
    grid_hz: float = 3.0,
    stride_s: float = 1.0,
    target_count: int | None = None,
    seed: int = 0,
) -> SegmentSet:
    """Sliding windows over every trajectory, truncated/sampled to
    ``target_count`` with a seeded shuffle when requested."""
    inputs, targets, ids = [], [], []
    for tid, (t, xy) in trajectories.items():
        t0, t1 = t[0], t[-1]
        end = t0 + segment_len_s
        while end + horizon_s <= t1 + 1e-9:
            window = resample_window(t, xy, end, segment_len_s, grid_hz)
            tx = np.interp(end + horizon_s, t, xy[:, 0])
            ty = np.interp(end + horizon_s, t, xy[:, 1])
            inputs.append(window)
            targets.append((tx, ty))
            ids.append(tid)
            end += stride_s
    if not inputs:
        raise ValueError("no segments: trajectories shorter than the window plus horizon")
    inputs_arr = np.asarray(inputs)
    targets_arr = np.asarray(targets)
    if target_count is not None and target_count < len(inputs_arr):
        keep = np.random.default_rng(seed).permutation(len(inputs_arr))[:target_count]
        keep.sort()
        inputs_arr, targets_arr = inputs_arr[keep], targets_arr[keep]
        ids = [ids[i] for i in keep]
    return SegmentSet(inputs=inputs_arr, targets=targets_arr, traj_ids=ids)


def split_by_trajectory(
    trajectories: dict[str, tuple[np.ndarray, np.ndarray]],
    val_frac: float = 0.1,
    seed: int = 0,
) -> tuple[dict, dict]:
    """Deterministic 90/10 train/validation split at trajectory level."""
    ids = sorted(trajectories)
    rng = np.random.default_rng(seed)
    rng.shuffle(ids)
    n_val = max(1, int(round(val_frac * len(ids))))
    val_ids = set(ids[:n_val])
    train = {tid: trajectories[tid] for tid in trajectories if tid not in val_ids}
    val = {tid: trajectories[tid] for tid in trajectories if tid in val_ids}
    return train, val

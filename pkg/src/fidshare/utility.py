"""Downstream-utility scoring of shared trajectories.

Shared data feeds a movement predictor; its value is measured by the
one-second-ahead position error, the absolute speed error, and the
heading error of the predicted motion, all against ground truth.  A
constant-velocity extrapolator is built in so utility is measurable
without any trained model; externally produced predictions are scored
through the same function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .trajectory_io import Trajectory


@dataclass(frozen=True)
class UtilityErrors:
    pos_err_1s: float
    vel_err: float
    heading_err: float


def _times_xy(samples) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(samples, tuple) and len(samples) == 2:
        t = np.asarray(samples[0], dtype=float)
        xy = np.asarray(samples[1], dtype=float)
        return t, xy
    items = list(samples)
    if items and hasattr(items[0], "xy"):
        t = np.array([s.t for s in items], dtype=float)
        xy = np.array([np.asarray(s.xy, dtype=float) for s in items])
        return t, xy
    raise DataError("expected samples with .t and .xy, or a (times, xy) pair")


def predict_cv(shared_samples, horizon_s: float = 1.0):
    """Constant-velocity extrapolation of each sample by ``horizon_s``.

    From the second sample on, the finite-difference velocity of the last
    two shared positions is carried forward, producing one prediction for
    time t_k + horizon per sample.  Returns (predicted_times, positions).
    """
    t, xy = _times_xy(shared_samples)
    if t.size < 2:
        raise DataError("predict_cv needs at least two samples")
    dt = np.diff(t)
    v = np.diff(xy, axis=0) / dt[:, None]
    pred_xy = xy[1:] + v * horizon_s
    pred_t = t[1:] + horizon_s
    return pred_t, pred_xy


def utility_errors(
    pred_times,
    pred_xy,
    truth: Trajectory,
    min_heading_speed: float = 0.1,
) -> UtilityErrors:
    """Score predictions against linearly interpolated ground truth.

    Velocity and heading are taken from finite differences of the
    prediction sequence and of the truth evaluated at the prediction
    instants, i.e. at the prediction horizon.  Samples where the true
    speed falls below ``min_heading_speed`` are excluded from the heading
    error (heading is undefined when nearly stationary); if no sample
    qualifies the heading error is reported as zero.
    """
    pred_times = np.asarray(pred_times, dtype=float)
    pred_xy = np.asarray(pred_xy, dtype=float)
    if pred_times.ndim != 1 or pred_xy.shape != (pred_times.size, 2):
        raise DataError("predictions must be (n,) times with (n, 2) positions")
    if pred_times.size < 2:
        raise DataError("utility_errors needs at least two predictions")

    truth_xy = truth.interp_xy(pred_times)
    pos_err = float(np.mean(np.linalg.norm(pred_xy - truth_xy, axis=1)))

    dt = np.diff(pred_times)
    if np.any(dt <= 0):
        raise DataError("prediction timestamps must be strictly increasing")
    v_pred = np.diff(pred_xy, axis=0) / dt[:, None]
    v_true = np.diff(truth_xy, axis=0) / dt[:, None]
    speed_pred = np.linalg.norm(v_pred, axis=1)
    speed_true = np.linalg.norm(v_true, axis=1)
    vel_err = float(np.mean(np.abs(speed_pred - speed_true)))

    moving = speed_true >= min_heading_speed
    if np.any(moving):
        dot = np.einsum("ij,ij->i", v_pred[moving], v_true[moving])
        denom = speed_pred[moving] * speed_true[moving]
        # A zero predicted velocity has no heading; count it as fully wrong.
        cosang = np.where(denom > 0, dot / np.maximum(denom, 1e-300), -1.0)
        ang = np.degrees(np.arccos(np.clip(cosang, -1.0, 1.0)))
        heading_err = float(np.mean(ang))
    else:
        heading_err = 0.0
    return UtilityErrors(pos_err_1s=pos_err, vel_err=vel_err, heading_err=heading_err)

"""Reconstruction attack and privacy scoring.

The modeled adversary smooths the shared samples with a centered moving
average (7 points by default) to strip injected and measurement noise,
then is scored by how many reconstructed points land within epsilon of
the ground truth: the privacy leak ratio (PLR), plus the durations of
maximal runs of consecutively leaked instants.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class LeakageSegment:
    """Maximal run of consecutive sample instants leaked to the adversary."""

    t_start: float
    t_end: float
    n_points: int

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start


@dataclass(frozen=True)
class LeakageReport:
    """Privacy metrics of one reconstruction attack on one trajectory."""

    plr: float
    segments: tuple[LeakageSegment, ...]
    avg_leak_s: float
    max_leak_s: float


def _positions_of(samples) -> np.ndarray:
    items = list(samples)
    if items and hasattr(items[0], "xy"):
        return np.array([np.asarray(s.xy, dtype=float) for s in items])
    arr = np.asarray(items, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DataError("expected (n, 2) positions or samples with .xy")
    return arr


def reconstruct_smooth(shared_samples, window_points: int = 7) -> np.ndarray:
    """Centered moving average of the shared positions.

    The window shrinks symmetrically near the ends so the output stays
    centered on each sample; timestamps are untouched.  Window must be
    odd; window 1 is the identity.
    """
    if window_points < 1 or window_points % 2 == 0:
        raise DataError(f"window_points must be odd and >= 1, got {window_points}")
    xy = _positions_of(shared_samples)
    n = xy.shape[0]
    if n == 0:
        raise DataError("cannot reconstruct from an empty sample list")
    half = window_points // 2
    idx = np.arange(n)
    h = np.minimum(np.minimum(idx, n - 1 - idx), half)
    cs = np.vstack([np.zeros((1, 2)), np.cumsum(xy, axis=0)])
    lo = idx - h
    hi = idx + h + 1
    out = (cs[hi] - cs[lo]) / (hi - lo)[:, None]
    # Single-element windows must reproduce the sample exactly.
    single = h == 0
    out[single] = xy[single]
    return out


def reconstruction_error(reconstructed, truth_interp) -> np.ndarray:
    """Per-point Euclidean distance between reconstruction and truth."""
    rec = np.asarray(reconstructed, dtype=float)
    tru = np.asarray(truth_interp, dtype=float)
    if rec.shape != tru.shape:
        raise DataError(f"shape mismatch: {rec.shape} vs {tru.shape}")
    return np.linalg.norm(rec - tru, axis=1)


def leakage_report(errors, timestamps, epsilon: float) -> LeakageReport:
    """Score one attack: leak ratio plus maximal leaked-run durations.

    A point leaks when its reconstruction error is at or below epsilon.
    A run's duration is last-minus-first timestamp, so an isolated leaked
    point contributes a zero-duration segment; with no leaked points the
    average and maximum durations are both zero.
    """
    if epsilon <= 0:
        raise DataError(f"epsilon must be positive, got {epsilon}")
    errors = np.asarray(errors, dtype=float)
    timestamps = np.asarray(timestamps, dtype=float)
    if errors.shape != timestamps.shape or errors.ndim != 1:
        raise DataError("errors and timestamps must be equal-length 1-D arrays")
    n = errors.size
    if n == 0:
        raise DataError("leakage_report needs at least one point")

    leaked = errors <= epsilon
    segments = []
    i = 0
    while i < n:
        if leaked[i]:
            j = i
            while j + 1 < n and leaked[j + 1]:
                j += 1
            segments.append(
                LeakageSegment(
                    t_start=float(timestamps[i]),
                    t_end=float(timestamps[j]),
                    n_points=j - i + 1,
                )
            )
            i = j + 1
        else:
            i += 1

    plr = float(leaked.sum()) / n
    if segments:
        durations = [s.duration for s in segments]
        avg_leak = float(np.mean(durations))
        max_leak = float(np.max(durations))
    else:
        avg_leak = 0.0
        max_leak = 0.0
    return LeakageReport(
        plr=plr, segments=tuple(segments), avg_leak_s=avg_leak, max_leak_s=max_leak
    )

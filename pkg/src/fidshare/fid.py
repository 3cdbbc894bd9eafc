"""Fisher-information accounting.

Each sensing update contributes a scalar Fisher information value; this
module turns a time-stamped sequence of those contributions into the
accumulated total, the average information rate over a window, and the
piecewise-constant Fisher information density (FID) that the sharing
mechanism thresholds.  The density over the interval ending at an update
is available exactly when that update is shared, so lookups are causal.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class FidSeries:
    """Piecewise-constant information density over (t_{k-1}, t_k] intervals.

    ``boundaries`` holds t_0 < t_1 < ... < t_K; ``values[k]`` is the
    density on (t_k, t_{k+1}], i.e. the information of the update at
    t_{k+1} divided by the interval length.
    """

    boundaries: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "boundaries", np.asarray(self.boundaries, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.values.size != self.boundaries.size - 1:
            raise DataError("FidSeries needs exactly one value per interval")
        if not np.all(np.diff(self.boundaries) > 0):
            raise DataError("FidSeries boundaries must be strictly increasing")
        if np.any(self.values < 0):
            raise DataError("FID values must be non-negative")

    def value_at(self, t: float) -> float:
        """Density at time t, for t in (boundaries[0], boundaries[-1]]."""
        b = self.boundaries
        if not (b[0] < t <= b[-1]):
            raise DataError(f"t={t} outside the covered interval ({b[0]}, {b[-1]}]")
        # Interval (b[k], b[k+1]] owns its right endpoint.
        k = bisect.bisect_left(b, t) - 1
        return float(self.values[k])

    def values_at_updates(self) -> np.ndarray:
        """Density at each update instant (the right edge of each interval)."""
        return self.values.copy()


def _fisher_of(updates) -> np.ndarray:
    items = list(updates)
    if items and hasattr(items[0], "fisher_info"):
        return np.array([u.fisher_info for u in items], dtype=float)
    return np.asarray(items, dtype=float)


def _times_of(updates) -> np.ndarray:
    items = list(updates)
    if items and hasattr(items[0], "t"):
        return np.array([u.t for u in items], dtype=float)
    raise DataError("fid_piecewise needs timestamped updates")


def accumulate(updates) -> float:
    """Total accumulated Fisher information over a window's updates.

    Accepts sensing updates or a plain sequence of information values.
    """
    arr = _fisher_of(updates)
    return float(arr.sum()) if arr.size else 0.0


def average_rate(updates, window_s: float) -> float:
    """Average Fisher information rate over a window of given length."""
    if window_s <= 0:
        raise DataError(f"window_s must be positive, got {window_s}")
    return accumulate(updates) / window_s


def fid_piecewise(updates, t0: float) -> FidSeries:
    """Build the piecewise FID from time-sorted updates.

    ``t0`` is the start of the observation window and must lie strictly
    before the first update; the value on (t_{k-1}, t_k] is the update's
    information divided by the interval length.
    """
    times = _times_of(updates)
    fisher = _fisher_of(updates)
    if times.size == 0:
        raise DataError("fid_piecewise needs at least one update")
    if np.any(np.diff(times) <= 0):
        raise DataError("update timestamps must be strictly increasing (no duplicates)")
    if not t0 < times[0]:
        raise DataError(f"t0={t0} must lie strictly before the first update at {times[0]}")
    boundaries = np.concatenate([[t0], times])
    widths = np.diff(boundaries)
    return FidSeries(boundaries=boundaries, values=fisher / widths)


def default_window_start(times) -> float:
    """Window start used by the pipeline: one nominal update interval
    before the first update (estimated from the median spacing), keeping
    the first FID interval finite and consistent with a uniform schedule.
    """
    times = np.asarray(list(times), dtype=float)
    spacing = float(np.median(np.diff(times))) if times.size >= 2 else 1.0
    return float(times[0] - spacing)

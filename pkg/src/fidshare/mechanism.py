"""Information-density-thresholded noise injection for shared trajectories.

Samples whose Fisher information density J stays at or below the
threshold eta pass through untouched; above the threshold the injected
noise std jumps to ``alpha * (beta_sat - 1)`` and saturates at
``alpha * beta_sat`` as J grows, so no shared segment can carry more
position information than the threshold allows:

    delta_sigma(J) = 0                                     if J <= eta
                     alpha * (beta_sat - exp(-(J/eta - 1)))  if J > eta

Fixed-std injection is provided as the baseline scheme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import MechanismParams
from .errors import DataError
from .fid import FidSeries


@dataclass(frozen=True)
class SharedSample:
    """One sanitized trajectory sample as released by the sharing system."""

    t: float
    xy: np.ndarray
    dsigma: float
    fid_at_t: float

    def __post_init__(self):
        if self.dsigma < 0:
            raise DataError(f"dsigma must be non-negative, got {self.dsigma}")


def delta_sigma(J: float, params: MechanismParams) -> float:
    """Injected-noise std (meters) for a sample with information density J."""
    if J < 0:
        raise DataError(f"information density must be non-negative, got {J}")
    if J <= params.eta:
        return 0.0
    return params.alpha * (params.beta_sat - math.exp(-(J / params.eta - 1.0)))


def _noise(ds: float, mode: str, rng) -> np.ndarray:
    if mode == "radial":
        theta = float(rng.uniform(0.0, 2.0 * math.pi))
        mag = float(rng.normal(0.0, 1.0)) * ds
        return mag * np.array([math.cos(theta), math.sin(theta)])
    return rng.normal(0.0, 1.0, size=2) * ds


def sanitize(updates, fid_series: FidSeries, params: MechanismParams, rng) -> list[SharedSample]:
    """Apply the thresholded noise rule to raw sensing updates.

    Each sample's noise std is set from the density of the interval ending
    at that sample (the causally available value).  Noise draws are taken
    for every sample, so a zero std reproduces the raw measurement exactly
    and runs are deterministic per seed.
    """
    out = []
    for u in updates:
        J = fid_series.value_at(u.t)
        ds = delta_sigma(J, params)
        noisy = np.asarray(u.raw_xy, dtype=float) + _noise(ds, params.noise_mode, rng)
        out.append(SharedSample(t=u.t, xy=noisy, dsigma=ds, fid_at_t=J))
    return out


def fixed_noise_baseline(
    updates, sigma: float, rng, fid_series: FidSeries | None = None,
    noise_mode: str = "per_axis",
) -> list[SharedSample]:
    """Baseline scheme: the same noise std for every sample regardless of
    information density.  ``fid_series`` is only used for bookkeeping."""
    if sigma < 0:
        raise DataError(f"sigma must be non-negative, got {sigma}")
    out = []
    for u in updates:
        J = fid_series.value_at(u.t) if fid_series is not None else math.nan
        noisy = np.asarray(u.raw_xy, dtype=float) + _noise(sigma, noise_mode, rng)
        out.append(SharedSample(t=u.t, xy=noisy, dsigma=sigma, fid_at_t=J))
    return out

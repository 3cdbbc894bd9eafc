"""Opportunistic sensing of a moving target by a fixed base station.

Scheduling, channel, and accuracy model:

* Update instants are rescheduled every ``rate_epoch_s`` seconds; within
  an epoch the rate is drawn uniformly from ``rate_range`` and samples
  are emitted at that fixed spacing.
* Per update, the link gain combines distance path loss, a lognormal
  beam-pointing fluctuation, a unit-mean Rician small-scale power factor,
  and an extra blockage loss when the epoch is non-line-of-sight.
* The per-update localization accuracy floor is the reciprocal of the
  scalar Fisher information ``I = gain * symbols * beamformed power``
  (matched beamforming collapses the transmit covariance to transmit
  power times array gain).  Raw measurements split that error budget
  evenly between a range and a cross-range Gaussian component, so the
  expected squared position error equals the accuracy floor exactly.

Position-conversion constants are folded into the configurable link
constant, which is calibrated once against the scene and then frozen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import SensingConfig
from .errors import DataError
from .trajectory_io import Trajectory


@dataclass(frozen=True)
class ChannelState:
    """One update's propagation state and effective link quality."""

    is_los: bool
    rician_k: float
    gain_beta: float
    snr_eff_db: float

    def __post_init__(self):
        if self.gain_beta <= 0:
            raise DataError(f"gain_beta must be positive, got {self.gain_beta}")


@dataclass(frozen=True)
class SensingUpdate:
    """One sensing event: time, information content, raw noisy fix."""

    t: float
    fisher_info: float
    raw_xy: np.ndarray
    channel: ChannelState

    def __post_init__(self):
        if self.fisher_info <= 0:
            raise DataError(f"fisher_info must be positive, got {self.fisher_info}")

    @property
    def crb(self) -> float:
        return 1.0 / self.fisher_info


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def beamformed_power_w(cfg: SensingConfig) -> float:
    """Matched-beam gain: transmit power (linear) times array size."""
    return dbm_to_watts(cfg.ptx_avg_dbm) * cfg.n_tx_antennas


def schedule_updates(traj_duration_s: float, cfg: SensingConfig, rng) -> np.ndarray:
    """Sensing instants over [0, duration) under epoch-wise rate redraws.

    Each epoch draws a rate r uniformly from ``cfg.rate_range`` and emits
    ``round(epoch_length * r)`` samples at spacing 1/r from the epoch
    start, so the long-run mean rate is the midpoint of the range.
    """
    if traj_duration_s <= 0:
        raise DataError(f"trajectory duration must be positive, got {traj_duration_s}")
    lo, hi = cfg.rate_range
    times = []
    e0 = 0.0
    while e0 < traj_duration_s:
        e1 = min(e0 + cfg.rate_epoch_s, traj_duration_s)
        r = float(rng.uniform(lo, hi))
        n = int((e1 - e0) * r + 0.5)
        times.extend(e0 + k / r for k in range(n))
        e0 = e1
    return np.asarray(times, dtype=float)


def _rician_power_factor(k_factor: float, rng) -> float:
    """Unit-mean squared magnitude of a Rician fading coefficient."""
    los = math.sqrt(k_factor / (k_factor + 1.0))
    scatter_std = math.sqrt(1.0 / (2.0 * (k_factor + 1.0)))
    re = los + rng.normal(0.0, scatter_std)
    im = rng.normal(0.0, scatter_std)
    return re * re + im * im


def draw_channel(
    target_xy,
    cfg: SensingConfig,
    rng,
    is_los: bool | None = None,
) -> ChannelState:
    """Draw the propagation state for one update of a target at ``target_xy``.

    ``is_los`` may be supplied by the caller when blockage is redrawn on a
    slower (per-epoch) cadence; when omitted it is drawn Bernoulli(p_los).
    """
    target_xy = np.asarray(target_xy, dtype=float)
    d = float(np.linalg.norm(target_xy - np.asarray(cfg.bs_position)))
    if d == 0.0:
        raise DataError("target coincides with the base station position")
    if is_los is None:
        is_los = bool(rng.random() < cfg.p_los)
    k_factor = cfg.rician_k_los if is_los else cfg.rician_k_nlos
    g_b_db = float(rng.normal(0.0, cfg.beam_fluct_std_db))
    chi = _rician_power_factor(k_factor, rng)
    extra_db = 0.0 if is_los else cfg.nlos_extra_loss_db
    n0_w = dbm_to_watts(cfg.noise_floor_dbm)
    gain_beta = (
        cfg.rcs_norm
        * 10.0 ** ((g_b_db - extra_db) / 10.0)
        * cfg.link_constant
        * d ** (-2.0 * cfg.pathloss_exp_avg)
        * chi
        / n0_w
    )
    snr_eff_db = 10.0 * math.log10(
        gain_beta * beamformed_power_w(cfg) * cfg.symbols_per_update
    )
    return ChannelState(
        is_los=is_los, rician_k=k_factor, gain_beta=gain_beta, snr_eff_db=snr_eff_db
    )


def fisher_info(channel: ChannelState, cfg: SensingConfig) -> float:
    """Scalar Fisher information of one update; its reciprocal is the
    squared-error floor of any unbiased position estimate."""
    return channel.gain_beta * cfg.symbols_per_update * beamformed_power_w(cfg)


def measure(true_xy, channel: ChannelState, cfg: SensingConfig, rng) -> np.ndarray:
    """Raw position fix with the error budget split evenly between range
    and cross-range.

    The cross-range displacement is the angular error times the range, so
    the expected squared position error equals 1 / fisher_info exactly.
    """
    true_xy = np.asarray(true_xy, dtype=float)
    bs = np.asarray(cfg.bs_position, dtype=float)
    rel = true_xy - bs
    r = float(np.linalg.norm(rel))
    if r == 0.0:
        raise DataError("target coincides with the base station position")
    crb = 1.0 / fisher_info(channel, cfg)
    sigma = math.sqrt(crb / 2.0)
    u_range = rel / r
    u_cross = np.array([-u_range[1], u_range[0]])
    n_range = float(rng.normal(0.0, sigma))
    n_cross = float(rng.normal(0.0, sigma))
    return true_xy + n_range * u_range + n_cross * u_cross


def sense_trajectory(traj: Trajectory, cfg: SensingConfig, rng) -> list[SensingUpdate]:
    """Run the full sensing pipeline over one trajectory.

    The schedule is drawn first, then blockage once per rate epoch, then
    per-update fading and measurement noise, all from the supplied
    generator in a fixed order, so a seeded generator reproduces the run
    bit-for-bit.
    """
    rel_times = schedule_updates(traj.duration, cfg, rng)
    if rel_times.size == 0:
        return []
    epoch_idx = np.floor(rel_times / cfg.rate_epoch_s).astype(int)
    n_epochs = int(epoch_idx.max()) + 1
    los_by_epoch = [bool(rng.random() < cfg.p_los) for _ in range(n_epochs)]

    abs_times = traj.t[0] + rel_times
    truth = traj.interp_xy(abs_times)

    updates = []
    for t, xy, e in zip(abs_times, truth, epoch_idx):
        channel = draw_channel(xy, cfg, rng, is_los=los_by_epoch[e])
        info = fisher_info(channel, cfg)
        raw = measure(xy, channel, cfg, rng)
        updates.append(SensingUpdate(t=float(t), fisher_info=info, raw_xy=raw, channel=channel))
    return updates

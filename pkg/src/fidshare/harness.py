"""Seeded Monte Carlo harness: single runs, power/scheme sweeps, plot data.

RNG discipline: every random stream is derived from the master seed plus
a purpose tag and the (trajectory, power) coordinates, via hashed
SeedSequence spawn keys.  Sensing streams never see the scheme, so the
raw measurements inside one (trajectory, power) cell are byte-identical
across schemes and adding a scheme never perturbs the others' draws.
Aggregation is a commutative mean/standard-error merge, so trajectory
order cannot change cell statistics.
"""

from __future__ import annotations

import dataclasses
import hashlib
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import adversary, fid, mechanism, sensing, utility
from .config import SimConfig
from .errors import ConfigError, DataError
from .trajectory_io import Trajectory, synth_corpus, write_csv

SCHEME_KINDS = ("fid_constrained", "fixed_sigma", "none")

METRIC_FIELDS = ("plr", "avg_leak_s", "max_leak_s", "pos_err_1s_m", "vel_err_mps", "heading_err_deg")


@dataclass(frozen=True)
class RunSpec:
    """One cell of the experiment grid: a sharing scheme at one power."""

    scheme: str
    ptx_dbm: float
    eta: float | None = None
    sigma_fixed: float | None = None
    n_trajectories: int = 100
    master_seed: int = 0

    def __post_init__(self):
        if self.scheme not in SCHEME_KINDS:
            raise ConfigError(f"unknown scheme {self.scheme!r}, expected one of {SCHEME_KINDS}")
        if self.scheme == "fid_constrained" and self.eta is None:
            raise ConfigError("fid_constrained scheme requires eta")
        if self.scheme != "fid_constrained" and self.eta is not None:
            raise ConfigError(f"eta is only valid for fid_constrained, not {self.scheme!r}")
        if self.scheme == "fixed_sigma" and self.sigma_fixed is None:
            raise ConfigError("fixed_sigma scheme requires sigma_fixed")
        if self.scheme != "fixed_sigma" and self.sigma_fixed is not None:
            raise ConfigError(f"sigma_fixed is only valid for fixed_sigma, not {self.scheme!r}")

    @property
    def label(self) -> str:
        if self.scheme == "none":
            return "none"
        if self.scheme == "fixed_sigma":
            return f"sigma_{self.sigma_fixed:g}"
        return f"eta_{self.eta:g}"


def derive_rng(master_seed: int, *keys) -> np.random.Generator:
    """Counter-style substream derivation from the master seed.

    String keys are hashed; floats are fixed-point quantized, so the same
    logical coordinates always yield the same stream regardless of call
    order or process.
    """
    ints = []
    for k in keys:
        if isinstance(k, (int, np.integer)):
            ints.append(int(k) & 0xFFFFFFFFFFFFFFFF)
        elif isinstance(k, float):
            ints.append(round(k * 1e6) & 0xFFFFFFFFFFFFFFFF)
        elif isinstance(k, str):
            digest = hashlib.sha256(k.encode("utf-8")).digest()
            ints.append(int.from_bytes(digest[:8], "little"))
        else:
            raise ConfigError(f"cannot derive rng key from {type(k).__name__}")
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(ints))
    return np.random.default_rng(ss)


@dataclass
class _SensedCell:
    """Sensing products of one (trajectory, power) cell, scheme-independent."""

    updates: list
    times: np.ndarray
    fid_series: fid.FidSeries
    truth_at_updates: np.ndarray


def _sense_cell(traj: Trajectory, ptx_dbm: float, cfg: SimConfig, master_seed: int) -> _SensedCell:
    sensing_cfg = dataclasses.replace(cfg.sensing, ptx_avg_dbm=ptx_dbm)
    rng = derive_rng(master_seed, "sense", traj.id, ptx_dbm)
    updates = sensing.sense_trajectory(traj, sensing_cfg, rng)
    if len(updates) < 4:
        raise DataError(f"trajectory {traj.id!r} produced too few sensing updates")
    times = np.array([u.t for u in updates])
    series = fid.fid_piecewise(updates, fid.default_window_start(times))
    return _SensedCell(
        updates=updates,
        times=times,
        fid_series=series,
        truth_at_updates=traj.interp_xy(times),
    )


def _apply_scheme(cell: _SensedCell, spec: RunSpec, cfg: SimConfig, traj_id: str):
    # The noise substream is keyed by (trajectory, power) only: schemes
    # within a cell replay the same draws (common random numbers), so
    # scheme comparisons are paired and adding a scheme never perturbs
    # the others.
    rng = derive_rng(spec.master_seed, "noise", traj_id, spec.ptx_dbm)
    if spec.scheme == "fid_constrained":
        params = cfg.privacy.mechanism(spec.eta)
        return mechanism.sanitize(cell.updates, cell.fid_series, params, rng)
    sigma = spec.sigma_fixed if spec.scheme == "fixed_sigma" else 0.0
    return mechanism.fixed_noise_baseline(
        cell.updates, sigma, rng, fid_series=cell.fid_series,
        noise_mode=cfg.privacy.noise_mode,
    )


def _score(cell: _SensedCell, shared, traj: Trajectory, cfg: SimConfig):
    recon = adversary.reconstruct_smooth(shared, cfg.privacy.attack_window)
    errors = adversary.reconstruction_error(recon, cell.truth_at_updates)
    leak = adversary.leakage_report(errors, cell.times, cfg.privacy.epsilon_m)

    pred_t, pred_xy = utility.predict_cv(shared, cfg.utility.horizon_s)
    inside = pred_t <= traj.t[-1]
    if inside.sum() < 2:
        raise DataError(f"trajectory {traj.id!r} too short to score 1 s ahead")
    errs = utility.utility_errors(
        pred_t[inside], pred_xy[inside], traj, cfg.utility.min_heading_speed
    )
    return leak, errs


def run_single(traj: Trajectory, run_spec: RunSpec, cfg: SimConfig):
    """Full pipeline on one trajectory: sense, account, share, attack, score.

    Deterministic given (trajectory, run_spec, config): all randomness is
    derived from run_spec.master_seed and the cell coordinates.
    """
    cell = _sense_cell(traj, run_spec.ptx_dbm, cfg, run_spec.master_seed)
    shared = _apply_scheme(cell, run_spec, cfg, traj.id)
    return _score(cell, shared, traj, cfg)


def shared_to_records(traj_id: str, shared, label: str) -> list[dict]:
    """Rows of the 'shared' CSV schema for one trajectory."""
    return [
        {
            "traj_id": traj_id,
            "t": s.t,
            "x": float(s.xy[0]),
            "y": float(s.xy[1]),
            "fid": s.fid_at_t,
            "dsigma": s.dsigma,
            "scheme": label,
        }
        for s in shared
    ]


def default_schemes(cfg: SimConfig) -> list[dict]:
    """Scheme axis of the default sweep grid: none, fixed sigmas, thresholds."""
    schemes: list[dict] = [{"scheme": "none"}]
    schemes += [{"scheme": "fixed_sigma", "sigma_fixed": s} for s in cfg.sweep.sigma_values]
    schemes += [{"scheme": "fid_constrained", "eta": e} for e in cfg.sweep.eta_values]
    return schemes


@dataclass
class CellStats:
    ptx_dbm: float
    label: str
    n: int
    mean: dict
    stderr: dict


@dataclass
class SweepResult:
    """Aggregated grid plus the per-run report rows that produced it."""

    cells: dict
    report_records: list[dict]
    ptx_grid: tuple
    labels: tuple

    def cell(self, ptx_dbm: float, label: str) -> CellStats:
        return self.cells[(ptx_dbm, label)]


def run_sweep(
    cfg: SimConfig,
    master_seed: int,
    trajectories: list[Trajectory] | None = None,
) -> SweepResult:
    """Paired Monte Carlo sweep over the power grid and scheme axis.

    Every cell reuses the same trajectory set, and within one
    (trajectory, power) cell all schemes see identical raw measurements;
    schemes differ only in post-measurement noise.
    """
    if trajectories is None:
        trajectories = synth_corpus(cfg.sweep.n_trajectories, master_seed, cfg.scene)
    if not trajectories:
        raise DataError("run_sweep needs at least one trajectory")

    grid = cfg.sweep.ptx_grid()
    scheme_axis = default_schemes(cfg)

    records: list[dict] = []
    labels: list[str] = []
    for traj in trajectories:
        for ptx in grid:
            cell = _sense_cell(traj, ptx, cfg, master_seed)
            for scheme_kwargs in scheme_axis:
                spec = RunSpec(
                    ptx_dbm=ptx,
                    n_trajectories=len(trajectories),
                    master_seed=master_seed,
                    **scheme_kwargs,
                )
                shared = _apply_scheme(cell, spec, cfg, traj.id)
                leak, errs = _score(cell, shared, traj, cfg)
                if spec.label not in labels:
                    labels.append(spec.label)
                row = {
                    "run_id": f"{spec.label}|p{ptx:g}|{traj.id}",
                    "scheme": spec.label,
                    "eta": spec.eta,
                    "ptx_dbm": ptx,
                    "seed": master_seed,
                    "plr": leak.plr,
                    "avg_leak_s": leak.avg_leak_s,
                    "max_leak_s": leak.max_leak_s,
                    "pos_err_1s_m": errs.pos_err_1s,
                    "vel_err_mps": errs.vel_err,
                    "heading_err_deg": errs.heading_err,
                }
                records.append(row)

    result = aggregate_report_records(records)
    return SweepResult(
        cells=result.cells,
        report_records=records,
        ptx_grid=tuple(grid),
        labels=tuple(labels),
    )


def aggregate_report_records(records: list[dict]) -> SweepResult:
    """Re-aggregate per-run report rows into per-cell mean and stderr.

    The merge is order-independent: cells are keyed by (power, scheme)
    and each metric is reduced with a plain mean / standard error.
    """
    if not records:
        raise DataError("no report records to aggregate")
    per_cell: dict = {}
    labels: list[str] = []
    grid: list[float] = []
    for row in records:
        key = (row["ptx_dbm"], row["scheme"])
        per_cell.setdefault(key, []).append(row)
        if row["scheme"] not in labels:
            labels.append(row["scheme"])
        if row["ptx_dbm"] not in grid:
            grid.append(row["ptx_dbm"])

    cells = {}
    for key, rows in per_cell.items():
        mean = {}
        stderr = {}
        for metric in METRIC_FIELDS:
            vals = np.array([r[metric] for r in rows], dtype=float)
            mean[metric] = float(vals.mean())
            stderr[metric] = float(vals.std(ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else 0.0
        cells[key] = CellStats(ptx_dbm=key[0], label=key[1], n=len(rows), mean=mean, stderr=stderr)
    return SweepResult(
        cells=cells,
        report_records=list(records),
        ptx_grid=tuple(sorted(grid)),
        labels=tuple(labels),
    )


# Figure panels: (file stem, metric column).
PLOT_PANELS = (
    ("fig3a_avg_leak_duration", "avg_leak_s"),
    ("fig3b_max_leak_duration", "max_leak_s"),
    ("fig3c_plr", "plr"),
    ("fig4a_pos_err", "pos_err_1s_m"),
    ("fig4b_vel_err", "vel_err_mps"),
    ("fig4c_heading_err", "heading_err_deg"),
)


def emit_plot_data(sweep_result: SweepResult, out_dir) -> list[Path]:
    """One CSV per figure panel with columns ptx_dbm, scheme, mean, stderr."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for stem, metric in PLOT_PANELS:
        path = out_dir / f"{stem}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("ptx_dbm,scheme,mean,stderr\n")
            for ptx in sweep_result.ptx_grid:
                for label in sweep_result.labels:
                    cell = sweep_result.cells[(ptx, label)]
                    fh.write(
                        f"{ptx!r},{label},{cell.mean[metric]!r},{cell.stderr[metric]!r}\n"
                    )
        written.append(path)
    return written


def write_report_csv(sweep_result: SweepResult, path) -> None:
    write_csv(sweep_result.report_records, "report", path)

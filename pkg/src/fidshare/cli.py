"""Command-line interface.

Subcommands: ingest, synth, simulate, sweep, metrics, plotdata.
Exit codes: 0 on success, 2 on configuration errors (bad flags, bad
config file, inconsistent scheme parameters), 3 on data errors
(malformed annotation files or CSVs, missing trajectories).
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import adversary, harness, utility
from .config import SimConfig, dump_default_config, load_config
from .errors import ConfigError, DataError, FidshareError
from .trajectory_io import (
    OpenTrajFormat,
    normalize_scene,
    parse_opentraj,
    read_csv,
    records_to_trajectories,
    synth_corpus,
    trajectories_to_records,
    write_csv,
)


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI config file; missing keys use built-in defaults")
    p.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override a single config key (repeatable)",
    )


def _build_config(args) -> SimConfig:
    overrides = {}
    for item in args.overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects SECTION.KEY=VALUE, got {item!r}")
        dotted, value = item.split("=", 1)
        overrides[dotted.strip()] = value.strip()
    return load_config(args.config, overrides)


def _load_truth(path: str):
    trajectories = records_to_trajectories(read_csv(path, "truth"))
    if not trajectories:
        raise DataError(f"no trajectories in {path}")
    return trajectories


def _cmd_ingest(args) -> int:
    cfg = _build_config(args)
    fmt = OpenTrajFormat(
        columns=tuple(args.columns.split(",")),
        frame_rate=args.frame_rate,
        delimiter=args.delimiter,
    )
    data = Path(args.input).read_bytes()
    result = parse_opentraj(data, fmt)
    trajectories = result.trajectories
    if args.normalize:
        trajectories = normalize_scene(trajectories, cfg.scene.bbox)
    write_csv(trajectories_to_records(trajectories), "truth", args.out)
    print(
        f"ingested {len(trajectories)} trajectories "
        f"({result.dropped_count} dropped by the 10-100 s duration filter) -> {args.out}"
    )
    return 0


def _cmd_synth(args) -> int:
    cfg = _build_config(args)
    trajectories = synth_corpus(args.n, args.seed, cfg.scene)
    write_csv(trajectories_to_records(trajectories), "truth", args.out)
    print(f"wrote {len(trajectories)} synthetic trajectories -> {args.out}")
    return 0


def _cmd_simulate(args) -> int:
    cfg = _build_config(args)
    trajectories = _load_truth(args.truth) if args.truth else synth_corpus(
        args.n_traj, args.seed, cfg.scene
    )
    spec = harness.RunSpec(
        scheme=args.scheme,
        ptx_dbm=args.ptx,
        eta=args.eta,
        sigma_fixed=args.sigma,
        n_trajectories=len(trajectories),
        master_seed=args.seed,
    )
    shared_records = []
    report_records = []
    for traj in trajectories:
        cell = harness._sense_cell(traj, spec.ptx_dbm, cfg, spec.master_seed)
        shared = harness._apply_scheme(cell, spec, cfg, traj.id)
        leak, errs = harness._score(cell, shared, traj, cfg)
        shared_records.extend(harness.shared_to_records(traj.id, shared, spec.label))
        report_records.append({
            "run_id": f"{spec.label}|p{spec.ptx_dbm:g}|{traj.id}",
            "scheme": spec.label,
            "eta": spec.eta,
            "ptx_dbm": spec.ptx_dbm,
            "seed": spec.master_seed,
            "plr": leak.plr,
            "avg_leak_s": leak.avg_leak_s,
            "max_leak_s": leak.max_leak_s,
            "pos_err_1s_m": errs.pos_err_1s,
            "vel_err_mps": errs.vel_err,
            "heading_err_deg": errs.heading_err,
        })
    if args.out_shared:
        write_csv(shared_records, "shared", args.out_shared)
    write_csv(report_records, "report", args.out_report)
    print(
        f"simulated scheme={spec.label} ptx={spec.ptx_dbm:g} dBm over "
        f"{len(trajectories)} trajectories -> {args.out_report}"
    )
    return 0


def _cmd_sweep(args) -> int:
    if args.n_traj is not None:
        args.overrides.append(f"sweep.n_trajectories={args.n_traj}")
    cfg = _build_config(args)
    trajectories = _load_truth(args.truth) if args.truth else None
    result = harness.run_sweep(cfg, args.seed, trajectories)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / "report.csv"
    harness.write_report_csv(result, report_path)
    print(f"swept {len(result.ptx_grid)} powers x {len(result.labels)} schemes -> {report_path}")
    return 0


def _group_by_traj(records):
    grouped: dict[str, list] = {}
    for rec in records:
        grouped.setdefault(rec["traj_id"], []).append(rec)
    return grouped


def _cmd_metrics(args) -> int:
    import numpy as np

    cfg = _build_config(args)
    shared_records = read_csv(args.shared, "shared")
    truths = {t.id: t for t in _load_truth(args.truth)}
    predictions = None
    if args.predictions:
        predictions = _group_by_traj(read_csv(args.predictions, "prediction"))

    report_records = []
    for traj_id, rows in _group_by_traj(shared_records).items():
        if traj_id not in truths:
            raise DataError(f"shared CSV references unknown trajectory {traj_id!r}")
        truth = truths[traj_id]
        times = np.array([r["t"] for r in rows])
        xy = np.array([[r["x"], r["y"]] for r in rows])
        scheme = rows[0]["scheme"]

        recon = adversary.reconstruct_smooth(xy, cfg.privacy.attack_window)
        errors = adversary.reconstruction_error(recon, truth.interp_xy(times))
        leak = adversary.leakage_report(errors, times, cfg.privacy.epsilon_m)

        if predictions is not None:
            if traj_id not in predictions:
                raise DataError(f"prediction CSV lacks trajectory {traj_id!r}")
            prows = predictions[traj_id]
            pred_t = np.array([r["t"] for r in prows])
            pred_xy = np.array([[r["x_pred"], r["y_pred"]] for r in prows])
        else:
            pred_t, pred_xy = utility.predict_cv((times, xy), cfg.utility.horizon_s)
        inside = pred_t <= truth.t[-1]
        if inside.sum() < 2:
            raise DataError(f"trajectory {traj_id!r}: not enough in-range predictions")
        errs = utility.utility_errors(
            pred_t[inside], pred_xy[inside], truth, cfg.utility.min_heading_speed
        )
        report_records.append({
            "run_id": f"{scheme}|metrics|{traj_id}",
            "scheme": scheme,
            "eta": None,
            "ptx_dbm": math.nan,
            "seed": 0,
            "plr": leak.plr,
            "avg_leak_s": leak.avg_leak_s,
            "max_leak_s": leak.max_leak_s,
            "pos_err_1s_m": errs.pos_err_1s,
            "vel_err_mps": errs.vel_err,
            "heading_err_deg": errs.heading_err,
        })
    write_csv(report_records, "report", args.out)
    print(f"scored {len(report_records)} trajectories -> {args.out}")
    return 0


def _cmd_plotdata(args) -> int:
    records = read_csv(args.report, "report")
    result = harness.aggregate_report_records(records)
    written = harness.emit_plot_data(result, args.out_dir)
    print(f"wrote {len(written)} figure CSVs -> {args.out_dir}")
    return 0


def _cmd_config(args) -> int:
    print(dump_default_config())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fidshare",
        description="Information-density constrained trajectory sharing simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse an OpenTraj-style annotation file into a truth CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--frame-rate", type=float, default=2.5)
    p.add_argument("--columns", default="frame,agent,x,y")
    p.add_argument("--delimiter", default=None)
    p.add_argument("--no-normalize", dest="normalize", action="store_false",
                   help="keep raw coordinates instead of mapping into the scene bbox")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("synth", help="generate a synthetic trajectory corpus")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    _add_config_flags(p)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("simulate", help="run one scheme at one power over a corpus")
    p.add_argument("--truth", help="truth CSV; omitted -> synthesize --n-traj trajectories")
    p.add_argument("--n-traj", type=int, default=100)
    p.add_argument("--scheme", required=True, choices=harness.SCHEME_KINDS)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--ptx", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-shared", default=None)
    p.add_argument("--out-report", required=True)
    _add_config_flags(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="full power x scheme Monte Carlo sweep")
    p.add_argument("--truth", help="truth CSV; omitted -> synthetic corpus")
    p.add_argument("--n-traj", type=int, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    _add_config_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("metrics", help="attack and score an existing shared CSV")
    p.add_argument("--shared", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--predictions", help="prediction CSV from an external model")
    p.add_argument("--out", required=True)
    _add_config_flags(p)
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("plotdata", help="aggregate a report CSV into per-figure CSVs")
    p.add_argument("--report", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_plotdata)

    p = sub.add_parser("config", help="print the default configuration as INI")
    p.set_defaults(func=_cmd_config)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except FidshareError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

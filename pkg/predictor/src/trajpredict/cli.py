"""Command-line interface: train on trajectory CSVs, emit prediction CSVs.

The only coupling to the simulator is through its file formats: truth or
shared CSVs in, prediction CSVs (traj_id, t, x_pred, y_pred) out.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import sys

from .model import LstmSpec, load_model, predict_trajectory, train
from .segments import make_segments, read_trajectory_csv, split_by_trajectory


def _cmd_train(args) -> int:
    spec = LstmSpec(epochs=args.epochs)
    trajectories = read_trajectory_csv(args.truth)
    if args.val_frac > 0:
        train_trajs, _ = split_by_trajectory(trajectories, args.val_frac, seed=args.seed)
    else:
        train_trajs = trajectories
    segments = make_segments(
        train_trajs,
        segment_len_s=spec.segment_len_s,
        horizon_s=spec.horizon_s,
        grid_hz=spec.grid_hz,
        stride_s=args.stride,
        target_count=args.segments,
        seed=args.seed,
    )
    summary = train(spec, segments, args.seed, args.out)
    print(
        f"trained on {summary['n_segments']} segments for {spec.epochs} epochs, "
        f"final loss {summary['final_loss']:.5f} -> {args.out}"
    )
    return 0


def _cmd_predict(args) -> int:
    model, spec, mean, std = load_model(args.model)
    trajectories = read_trajectory_csv(args.shared)
    n_rows = 0
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["traj_id", "t", "x_pred", "y_pred"])
        for tid, (t, xy) in trajectories.items():
            pred_t, pred_xy = predict_trajectory(model, spec, mean, std, t, xy)
            for pt, (px, py) in zip(pred_t, pred_xy):
                writer.writerow([tid, repr(float(pt)), repr(float(px)), repr(float(py))])
                n_rows += 1
    print(f"wrote {n_rows} predictions -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trajpredict", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train the predictor on a truth CSV")
    p.add_argument("--truth", required=True)
    p.add_argument("--out", required=True, help="model artifact file (.pt)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--epochs", type=int, default=200,
                   help="desk-scale default; use 1000 for a paper-scale run")
    p.add_argument("--segments", type=int, default=1000,
                   help="training segment budget; use 10000 for paper scale")
    p.add_argument("--stride", type=float, default=1.0)
    p.add_argument("--val-frac", type=float, default=0.1,
                   help="trajectory fraction held out of training")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="predict 1 s ahead for every sample of a CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--shared", required=True, help="shared or truth CSV")
    p.add_argument("--out", required=True, help="prediction CSV")
    p.set_defaults(func=_cmd_predict)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Trajectory ingestion, synthesis, normalization, and CSV serialization.

Ground-truth paths come either from OpenTraj-style annotation files
(whitespace-delimited frame / agent / x / y rows, as in the ETH and UCY
scenes) or from a built-in random-waypoint generator, so every experiment
can run without third-party data.  All data products cross process
boundaries as four fixed CSV schemas: ``truth``, ``shared``, ``report``
and ``prediction``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .config import SceneConfig
from .errors import DataError


class TrajPoint(NamedTuple):
    t: float
    x: float
    y: float


@dataclass
class Trajectory:
    """One target's timestamped 2-D ground-truth path."""

    id: str
    t: np.ndarray
    xy: np.ndarray

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.xy = np.asarray(self.xy, dtype=float)
        if self.t.ndim != 1 or self.xy.shape != (self.t.size, 2):
            raise DataError(f"trajectory {self.id!r}: t must be (n,), xy must be (n, 2)")
        if self.t.size < 2:
            raise DataError(f"trajectory {self.id!r}: needs at least 2 points")
        if not np.all(np.isfinite(self.t)) or not np.all(np.isfinite(self.xy)):
            raise DataError(f"trajectory {self.id!r}: non-finite coordinates")
        if not np.all(np.diff(self.t) > 0):
            raise DataError(f"trajectory {self.id!r}: timestamps must be strictly increasing")

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])

    @property
    def points(self) -> list[TrajPoint]:
        return [TrajPoint(float(t), float(x), float(y)) for t, (x, y) in zip(self.t, self.xy)]

    def interp_xy(self, times: np.ndarray) -> np.ndarray:
        """Linearly interpolate the path at the given timestamps (clamped at ends)."""
        times = np.asarray(times, dtype=float)
        x = np.interp(times, self.t, self.xy[:, 0])
        y = np.interp(times, self.t, self.xy[:, 1])
        return np.column_stack([x, y])


@dataclass(frozen=True)
class OpenTrajFormat:
    """Column layout of an OpenTraj-style annotation file.

    ``columns`` gives the order of the frame, agent, x and y fields within
    each row; extra trailing fields are ignored.  ``delimiter=None`` splits
    on any whitespace.
    """

    columns: tuple[str, str, str, str] = ("frame", "agent", "x", "y")
    frame_rate: float = 2.5
    delimiter: str | None = None
    comment_prefix: str = "#"

    def column_index(self, name: str) -> int:
        try:
            return self.columns.index(name)
        except ValueError:
            raise DataError(f"format descriptor lacks a {name!r} column")


@dataclass
class ParseResult:
    trajectories: list[Trajectory]
    dropped_count: int = 0


# Duration window applied at ingestion so downstream modules never see
# degenerate paths.
MIN_DURATION_S = 10.0
MAX_DURATION_S = 100.0


def parse_opentraj(file_bytes: bytes, fmt: OpenTrajFormat = OpenTrajFormat()) -> ParseResult:
    """Parse an annotation file into one Trajectory per agent id.

    Timestamps are frame / frame_rate.  Trajectories shorter than 10 s or
    longer than 100 s are dropped and counted.  An empty file yields an
    empty result; a malformed line raises DataError naming the line.
    """
    if fmt.frame_rate <= 0:
        raise DataError(f"frame_rate must be positive, got {fmt.frame_rate}")
    text = file_bytes.decode("utf-8", errors="strict")
    i_frame = fmt.column_index("frame")
    i_agent = fmt.column_index("agent")
    i_x = fmt.column_index("x")
    i_y = fmt.column_index("y")
    n_needed = max(i_frame, i_agent, i_x, i_y) + 1

    by_agent: dict[str, list[tuple[float, float, float]]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith(fmt.comment_prefix):
            continue
        fields = stripped.split(fmt.delimiter)
        if len(fields) < n_needed:
            raise DataError(
                f"line {lineno}: expected at least {n_needed} fields, got {len(fields)}"
            )
        try:
            frame = float(fields[i_frame])
            x = float(fields[i_x])
            y = float(fields[i_y])
        except ValueError as exc:
            raise DataError(f"line {lineno}: {exc}")
        agent = fields[i_agent]
        by_agent.setdefault(agent, []).append((frame, x, y))

    trajectories: list[Trajectory] = []
    dropped = 0
    for agent, rows in by_agent.items():
        rows.sort(key=lambda r: r[0])
        t = np.array([r[0] for r in rows]) / fmt.frame_rate
        xy = np.array([[r[1], r[2]] for r in rows])
        if len(rows) < 2:
            dropped += 1
            continue
        duration = float(t[-1] - t[0])
        if not (MIN_DURATION_S <= duration <= MAX_DURATION_S):
            dropped += 1
            continue
        trajectories.append(Trajectory(id=agent, t=t, xy=xy))
    return ParseResult(trajectories=trajectories, dropped_count=dropped)


def normalize_scene(
    trajectories: Iterable[Trajectory],
    target_bbox: tuple[float, float, float, float],
) -> list[Trajectory]:
    """Map the data's joint bounding box into ``target_bbox``.

    Uses a uniform-scale (aspect-preserving) affine map so speeds and
    headings keep their relative geometry; the scaled data is centered in
    the target box.  Timestamps are unchanged.
    """
    trajectories = list(trajectories)
    if not trajectories:
        return []
    all_xy = np.vstack([traj.xy for traj in trajectories])
    dx0, dy0 = all_xy.min(axis=0)
    dx1, dy1 = all_xy.max(axis=0)
    if dx1 - dx0 <= 0 or dy1 - dy0 <= 0:
        raise DataError("degenerate data bounding box (zero width or height)")
    tx0, tx1, ty0, ty1 = target_bbox
    if tx1 - tx0 <= 0 or ty1 - ty0 <= 0:
        raise DataError(f"degenerate target bounding box {target_bbox}")

    scale = min((tx1 - tx0) / (dx1 - dx0), (ty1 - ty0) / (dy1 - dy0))
    data_center = np.array([(dx0 + dx1) / 2, (dy0 + dy1) / 2])
    target_center = np.array([(tx0 + tx1) / 2, (ty0 + ty1) / 2])

    out = []
    for traj in trajectories:
        xy = (traj.xy - data_center) * scale + target_center
        out.append(Trajectory(id=traj.id, t=traj.t.copy(), xy=xy))
    return out


def synth_trajectory(
    rng_seed: int,
    duration_s: float,
    speed_range: tuple[float, float] | None = None,
    scene: SceneConfig | None = None,
) -> Trajectory:
    """Generate a random-waypoint pedestrian path, deterministic per seed.

    The walker picks a nearby waypoint (leg length drawn from the scene's
    leg range), walks to it at a per-leg speed drawn from ``speed_range``,
    and repeats, staying inside the scene's walkable box.  Waypoint arrival
    times land on the ground-truth grid so every sampled step moves at its
    leg's speed.  Output resolution is ``scene.truth_hz`` (10 Hz default).
    """
    scene = scene or SceneConfig()
    speed_range = speed_range or scene.speed_range
    lo, hi = speed_range
    if not (0.0 < lo <= hi <= 3.0):
        raise ValueError(f"speed_range must lie within (0, 3] m/s, got {speed_range}")
    if not (MIN_DURATION_S <= duration_s <= MAX_DURATION_S):
        raise ValueError(f"duration_s must lie within [10, 100] s, got {duration_s}")

    rng = np.random.default_rng(rng_seed)
    x0, x1, y0, y1 = scene.walk_bbox
    dt = 1.0 / scene.truth_hz

    pos = np.array([rng.uniform(x0, x1), rng.uniform(y0, y1)])
    wp_t = [0.0]
    wp_xy = [pos.copy()]
    t_now = 0.0
    while t_now < duration_s:
        speed = rng.uniform(lo, hi)
        target_len = rng.uniform(*scene.leg_range_m)
        # Quantize the leg duration to the truth grid, then derive the leg
        # length from it so the sampled chord speed equals the leg speed.
        leg_steps = max(2, round(target_len / speed / dt))
        leg_len = speed * leg_steps * dt
        for _ in range(32):
            heading = rng.uniform(0.0, 2.0 * np.pi)
            cand = pos + leg_len * np.array([np.cos(heading), np.sin(heading)])
            if x0 <= cand[0] <= x1 and y0 <= cand[1] <= y1:
                break
        else:
            # Cornered: head for a random interior point instead.
            interior = np.array([rng.uniform(x0, x1), rng.uniform(y0, y1)])
            direction = interior - pos
            cand = pos + leg_len * direction / np.linalg.norm(direction)
            cand = np.clip(cand, [x0, y0], [x1, y1])
        t_now += leg_steps * dt
        pos = cand
        wp_t.append(t_now)
        wp_xy.append(pos.copy())

    wp_t_arr = np.array(wp_t)
    wp_xy_arr = np.array(wp_xy)
    n = round(duration_s * scene.truth_hz) + 1
    t = np.arange(n) * dt
    x = np.interp(t, wp_t_arr, wp_xy_arr[:, 0])
    y = np.interp(t, wp_t_arr, wp_xy_arr[:, 1])
    return Trajectory(id=f"synth-{rng_seed}", t=t, xy=np.column_stack([x, y]))


def synth_corpus(
    n_trajectories: int,
    master_seed: int,
    scene: SceneConfig | None = None,
) -> list[Trajectory]:
    """Generate a corpus of synthetic trajectories with varied durations."""
    scene = scene or SceneConfig()
    d0, d1 = scene.duration_range_s
    out = []
    for i in range(n_trajectories):
        ss = np.random.SeedSequence(master_seed, spawn_key=(0, i))
        dur_rng = np.random.default_rng(ss)
        duration = round(dur_rng.uniform(d0, d1), 1)
        seed = int(dur_rng.integers(0, 2**63 - 1))
        traj = synth_trajectory(seed, duration, scene=scene)
        traj.id = f"synth-{master_seed}-{i:03d}"
        out.append(traj)
    return out


# --- CSV schemas -----------------------------------------------------------

_OPT_FLOAT = "optfloat"

CSV_SCHEMAS: dict[str, tuple[tuple[str, object], ...]] = {
    "truth": (
        ("traj_id", str), ("t", float), ("x", float), ("y", float),
    ),
    "shared": (
        ("traj_id", str), ("t", float), ("x", float), ("y", float),
        ("fid", float), ("dsigma", float), ("scheme", str),
    ),
    "report": (
        ("run_id", str), ("scheme", str), ("eta", _OPT_FLOAT), ("ptx_dbm", float),
        ("seed", int), ("plr", float), ("avg_leak_s", float), ("max_leak_s", float),
        ("pos_err_1s_m", float), ("vel_err_mps", float), ("heading_err_deg", float),
    ),
    "prediction": (
        ("traj_id", str), ("t", float), ("x_pred", float), ("y_pred", float),
    ),
}


def _schema(schema_id: str):
    try:
        return CSV_SCHEMAS[schema_id]
    except KeyError:
        raise DataError(f"unknown CSV schema {schema_id!r}")


def _format_cell(value, kind, column: str) -> str:
    if kind is str:
        return str(value)
    if kind is int:
        return str(int(value))
    if kind is _OPT_FLOAT:
        if value is None or value == "":
            return ""
        return repr(float(value))
    return repr(float(value))


def _parse_cell(raw: str, kind, row: int, column: str):
    try:
        if kind is str:
            return raw
        if kind is int:
            return int(raw)
        if kind is _OPT_FLOAT:
            return None if raw == "" else float(raw)
        return float(raw)
    except ValueError:
        raise DataError(f"row {row}, column {column!r}: cannot parse {raw!r}")


def write_csv(records: Iterable[dict], schema_id: str, sink) -> None:
    """Write records (dicts keyed by column name) under a fixed schema.

    ``sink`` is a path or a text file object.  Floats are written with
    full round-trip precision; line endings are LF.
    """
    schema = _schema(schema_id)
    own = isinstance(sink, (str, Path))
    fh = open(sink, "w", encoding="utf-8", newline="") if own else sink
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([name for name, _ in schema])
        for rec in records:
            try:
                writer.writerow([_format_cell(rec[name], kind, name) for name, kind in schema])
            except KeyError as exc:
                raise DataError(f"record missing column {exc.args[0]!r} for schema {schema_id!r}")
    finally:
        if own:
            fh.close()


def read_csv(source, schema_id: str) -> list[dict]:
    """Read a CSV produced by write_csv, validating header and cell types."""
    schema = _schema(schema_id)
    own = isinstance(source, (str, Path))
    fh = open(source, "r", encoding="utf-8", newline="") if own else source
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"empty file: expected {schema_id!r} header")
        expected = [name for name, _ in schema]
        if header != expected:
            raise DataError(
                f"header mismatch for schema {schema_id!r}: expected {expected}, got {header}"
            )
        records = []
        for rownum, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(schema):
                raise DataError(f"row {rownum}: expected {len(schema)} fields, got {len(row)}")
            records.append(
                {name: _parse_cell(raw, kind, rownum, name)
                 for (name, kind), raw in zip(schema, row)}
            )
        return records
    finally:
        if own:
            fh.close()


def trajectories_to_records(trajectories: Iterable[Trajectory]) -> list[dict]:
    records = []
    for traj in trajectories:
        for t, (x, y) in zip(traj.t, traj.xy):
            records.append({"traj_id": traj.id, "t": float(t), "x": float(x), "y": float(y)})
    return records


def records_to_trajectories(records: Iterable[dict]) -> list[Trajectory]:
    by_id: dict[str, list] = {}
    order: list[str] = []
    for rec in records:
        tid = rec["traj_id"]
        if tid not in by_id:
            by_id[tid] = []
            order.append(tid)
        by_id[tid].append((rec["t"], rec["x"], rec["y"]))
    out = []
    for tid in order:
        rows = by_id[tid]
        t = np.array([r[0] for r in rows])
        xy = np.array([[r[1], r[2]] for r in rows])
        out.append(Trajectory(id=tid, t=t, xy=xy))
    return out

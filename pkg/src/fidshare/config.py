"""Configuration surface for the simulator.

Defaults mirror the documented simulation setup (sensing / channel block,
privacy block, utility block).  A config file is a plain INI file with the
sections [sensing], [privacy], [utility], [scene] and [sweep]; any key
present overrides the default of the same name.  Every value a sweep
depends on lives here so that a frozen config file pins a reproducible
experiment.
"""

from __future__ import annotations

import configparser
import dataclasses
import typing
from dataclasses import dataclass, field

from .errors import ConfigError


@dataclass(frozen=True)
class SensingConfig:
    """Radio, channel, and scheduling parameters of the sensing simulation."""

    f_c_hz: float = 3.5e9
    bandwidth_hz: float = 100e6
    noise_floor_dbm: float = -91.0
    ptx_avg_dbm: float = 35.0
    n_tx_antennas: int = 16
    beam_fluct_std_db: float = 2.0
    pathloss_exp_avg: float = 2.7
    rician_k_los: float = 3.0
    rician_k_nlos: float = 0.1
    n_multipath: int = 4
    max_delay_spread_s: float = 2e-7
    p_los: float = 0.7
    nlos_extra_loss_db: float = 10.0
    symbols_per_update: int = 64
    bs_position: tuple[float, float] = (5.0, 30.0)
    rate_epoch_s: float = 5.0
    rate_range: tuple[float, float] = (2.0, 4.0)
    # Link-budget constant folding reference gain, radar cross-section and
    # the position-conversion factor into one scalar; calibrated once so the
    # per-update effective SNR spans roughly [0, 40] dB over the 15-50 dBm
    # transmit-power range at median scene distance, then frozen.
    link_constant: float = 8e-6
    rcs_norm: float = 1.0

    def __post_init__(self):
        if not (15.0 <= self.ptx_avg_dbm <= 50.0):
            raise ConfigError(
                f"ptx_avg_dbm must be within [15, 50] dBm, got {self.ptx_avg_dbm}"
            )
        if not (0.0 <= self.p_los <= 1.0):
            raise ConfigError(f"p_los must be a probability, got {self.p_los}")
        lo, hi = self.rate_range
        if not (2.0 <= lo <= hi <= 4.0):
            raise ConfigError(
                f"rate_range must be an interval within [2, 4] samples/s, got {self.rate_range}"
            )
        if self.rate_epoch_s <= 0:
            raise ConfigError(f"rate_epoch_s must be positive, got {self.rate_epoch_s}")
        if self.n_tx_antennas < 1 or self.symbols_per_update < 1:
            raise ConfigError("n_tx_antennas and symbols_per_update must be >= 1")
        if self.link_constant <= 0:
            raise ConfigError("link_constant must be positive")


@dataclass(frozen=True)
class MechanismParams:
    """Parameters of the thresholded, saturating noise-injection rule."""

    eta: float = 50.0
    alpha: float = 0.5
    beta_sat: float = 1.5
    # "per_axis": independent Gaussian noise on x and y, each with std
    # delta_sigma.  "radial": one Gaussian draw along a random direction.
    noise_mode: str = "per_axis"

    def __post_init__(self):
        if self.eta <= 0:
            raise ConfigError(f"eta must be positive, got {self.eta}")
        if self.alpha <= 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if self.beta_sat <= 1:
            raise ConfigError(f"beta_sat must exceed 1, got {self.beta_sat}")
        if self.noise_mode not in ("per_axis", "radial"):
            raise ConfigError(f"unknown noise_mode {self.noise_mode!r}")


@dataclass(frozen=True)
class PrivacyEvalConfig:
    """Adversary model and leak-threshold parameters."""

    epsilon_m: float = 0.3
    attack_window: int = 7
    alpha: float = 0.5
    beta_sat: float = 1.5
    noise_mode: str = "per_axis"

    def __post_init__(self):
        if self.epsilon_m <= 0:
            raise ConfigError(f"epsilon_m must be positive, got {self.epsilon_m}")
        if self.attack_window < 1 or self.attack_window % 2 == 0:
            raise ConfigError(
                f"attack_window must be odd and >= 1, got {self.attack_window}"
            )

    def mechanism(self, eta: float) -> MechanismParams:
        return MechanismParams(
            eta=eta, alpha=self.alpha, beta_sat=self.beta_sat, noise_mode=self.noise_mode
        )


@dataclass(frozen=True)
class UtilityConfig:
    """Movement-prediction scoring parameters."""

    horizon_s: float = 1.0
    min_heading_speed: float = 0.1

    def __post_init__(self):
        if self.horizon_s <= 0:
            raise ConfigError(f"horizon_s must be positive, got {self.horizon_s}")


@dataclass(frozen=True)
class SceneConfig:
    """Scene geometry and the synthetic-trajectory fallback generator.

    The generator defaults emulate brisk, frequently turning pedestrian
    traffic (a busy plaza or intersection): short walk legs with fresh
    headings every one to two meters.  Together with the link constant
    these were calibrated once against the evaluation bounds and frozen.
    """

    # Axis-aligned scene bounding box: (x_min, x_max, y_min, y_max), meters.
    bbox: tuple[float, float, float, float] = (0.0, 60.0, 0.0, 60.0)
    # Region the synthetic pedestrians walk in.  Kept clear of the base
    # station mount so generated paths resemble a plaza in front of it.
    walk_bbox: tuple[float, float, float, float] = (20.0, 55.0, 5.0, 55.0)
    speed_range: tuple[float, float] = (1.8, 3.0)
    leg_range_m: tuple[float, float] = (0.6, 1.5)
    truth_hz: float = 10.0
    duration_range_s: tuple[float, float] = (10.0, 100.0)

    def __post_init__(self):
        x0, x1, y0, y1 = self.bbox
        if x1 <= x0 or y1 <= y0:
            raise ConfigError(f"degenerate scene bbox {self.bbox}")
        lo, hi = self.speed_range
        if not (0.0 < lo <= hi <= 3.0):
            raise ConfigError(
                f"speed_range must lie within (0, 3] m/s, got {self.speed_range}"
            )
        d0, d1 = self.duration_range_s
        if not (10.0 <= d0 <= d1 <= 100.0):
            raise ConfigError(
                f"duration_range_s must lie within [10, 100] s, got {self.duration_range_s}"
            )


@dataclass(frozen=True)
class SweepConfig:
    """Monte Carlo sweep grid over transmit power and sharing schemes."""

    ptx_min_dbm: float = 15.0
    ptx_max_dbm: float = 50.0
    ptx_step_dbm: float = 5.0
    eta_values: tuple[float, ...] = (50.0, 250.0)
    sigma_values: tuple[float, ...] = (0.1, 0.7)
    n_trajectories: int = 100

    def __post_init__(self):
        if self.ptx_step_dbm <= 0 or self.ptx_max_dbm < self.ptx_min_dbm:
            raise ConfigError("invalid transmit-power grid")
        if self.n_trajectories < 1:
            raise ConfigError("n_trajectories must be >= 1")

    def ptx_grid(self) -> tuple[float, ...]:
        grid = []
        p = self.ptx_min_dbm
        while p <= self.ptx_max_dbm + 1e-9:
            grid.append(round(p, 6))
            p += self.ptx_step_dbm
        return tuple(grid)


@dataclass(frozen=True)
class SimConfig:
    """Full configuration bundle consumed by the harness and the CLI."""

    sensing: SensingConfig = field(default_factory=SensingConfig)
    privacy: PrivacyEvalConfig = field(default_factory=PrivacyEvalConfig)
    utility: UtilityConfig = field(default_factory=UtilityConfig)
    scene: SceneConfig = field(default_factory=SceneConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)


_SECTION_TYPES = {
    "sensing": SensingConfig,
    "privacy": PrivacyEvalConfig,
    "utility": UtilityConfig,
    "scene": SceneConfig,
    "sweep": SweepConfig,
}


def _coerce(raw: str, annotation, section: str, key: str):
    origin = typing.get_origin(annotation)
    if origin is tuple:
        parts = [p.strip() for p in raw.split(",") if p.strip() != ""]
        try:
            return tuple(float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"[{section}] {key}: expected comma-separated numbers, got {raw!r}")
    if annotation is int:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key}: expected an integer, got {raw!r}")
    if annotation is float:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key}: expected a number, got {raw!r}")
    return raw


def load_config(path: str | None = None, overrides: dict | None = None) -> SimConfig:
    """Build a SimConfig from defaults, an optional INI file, and overrides.

    ``overrides`` maps ``section.key`` to a value (already typed or a
    string) and takes precedence over the file.  Unknown sections or keys
    raise ConfigError.
    """
    values: dict[str, dict] = {name: {} for name in _SECTION_TYPES}

    if path is not None:
        parser = configparser.ConfigParser()
        read = parser.read(path)
        if not read:
            raise ConfigError(f"config file not found: {path}")
        for section in parser.sections():
            if section not in _SECTION_TYPES:
                raise ConfigError(f"unknown config section [{section}]")
            cls = _SECTION_TYPES[section]
            fields = {f.name: f for f in dataclasses.fields(cls)}
            hints = typing.get_type_hints(cls)
            for key, raw in parser[section].items():
                if key not in fields:
                    raise ConfigError(f"unknown key {key!r} in section [{section}]")
                values[section][key] = _coerce(raw, hints[key], section, key)

    for dotted, value in (overrides or {}).items():
        try:
            section, key = dotted.split(".", 1)
        except ValueError:
            raise ConfigError(f"override key must look like 'section.key', got {dotted!r}")
        if section not in _SECTION_TYPES:
            raise ConfigError(f"unknown config section [{section}]")
        cls = _SECTION_TYPES[section]
        fields = {f.name: f for f in dataclasses.fields(cls)}
        if key not in fields:
            raise ConfigError(f"unknown key {key!r} in section [{section}]")
        if isinstance(value, str):
            hints = typing.get_type_hints(cls)
            value = _coerce(value, hints[key], section, key)
        values[section][key] = value

    kwargs = {}
    for section, cls in _SECTION_TYPES.items():
        try:
            kwargs[section] = cls(**values[section])
        except TypeError as exc:
            raise ConfigError(f"bad [{section}] configuration: {exc}")
    return SimConfig(**kwargs)


def dump_default_config() -> str:
    """Render the default configuration as an INI string (documentation aid)."""
    lines = []
    for section, cls in _SECTION_TYPES.items():
        lines.append(f"[{section}]")
        for f in dataclasses.fields(cls):
            default = f.default
            if default is dataclasses.MISSING:
                default = f.default_factory()  # type: ignore[misc]
            if isinstance(default, tuple):
                rendered = ", ".join(repr(v) for v in default)
            elif isinstance(default, str):
                rendered = default
            else:
                rendered = repr(default)
            lines.append(f"{f.name} = {rendered}")
        lines.append("")
    return "\n".join(lines)

"""Fisher-information-density constrained trajectory sharing.

A desk-scale simulator for trajectory sharing under an information-density
budget: a base station opportunistically senses pedestrian targets, the
sharing mechanism injects noise whenever the per-segment Fisher
information density exceeds a threshold, a smoothing adversary tries to
reconstruct the path, and the harness quantifies the resulting
privacy-utility trade-off across transmit powers and schemes.
"""

from .adversary import LeakageReport, LeakageSegment, leakage_report, reconstruct_smooth, reconstruction_error
from .config import (
    MechanismParams,
    PrivacyEvalConfig,
    SceneConfig,
    SensingConfig,
    SimConfig,
    SweepConfig,
    UtilityConfig,
    load_config,
)
from .errors import ConfigError, DataError, FidshareError
from .fid import FidSeries, accumulate, average_rate, default_window_start, fid_piecewise
from .harness import RunSpec, SweepResult, emit_plot_data, run_single, run_sweep
from .mechanism import SharedSample, delta_sigma, fixed_noise_baseline, sanitize
from .sensing import ChannelState, SensingUpdate, draw_channel, fisher_info, measure, schedule_updates, sense_trajectory
from .trajectory_io import (
    OpenTrajFormat,
    ParseResult,
    TrajPoint,
    Trajectory,
    normalize_scene,
    parse_opentraj,
    read_csv,
    synth_corpus,
    synth_trajectory,
    write_csv,
)
from .utility import UtilityErrors, predict_cv, utility_errors

__version__ = "0.1.0"

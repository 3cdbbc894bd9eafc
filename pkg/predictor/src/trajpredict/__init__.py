"""LSTM movement predictor for shared-trajectory CSVs."""

from .model import LstmSpec, MovementLstm, load_model, predict_trajectory, train
from .segments import SegmentSet, make_segments, read_trajectory_csv, split_by_trajectory

__version__ = "0.1.0"

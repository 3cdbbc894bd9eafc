"""LSTM movement predictor: training and batch inference.

A stacked LSTM reads a position window expressed relative to its newest
sample (translation-invariant) and scaled by the scene's training-set
standard deviation, and predicts the scaled displacement to the position
one second ahead; adding the anchor position back gives the prediction.
Training is deterministic per seed, and the saved artifact carries the
architecture, the normalization statistics, and the per-epoch loss
curve.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
import torch
from torch import nn

from .segments import SegmentSet


@dataclass(frozen=True)
class LstmSpec:
    """Architecture and training defaults; desk runs override epochs."""

    d_in: int = 2
    d_out: int = 2
    hidden: int = 64
    layers: int = 3
    lr: float = 1.6e-3
    batch: int = 64
    epochs: int = 1000
    segment_len_s: float = 12.0
    grid_hz: float = 3.0
    horizon_s: float = 1.0


class MovementLstm(nn.Module):
    def __init__(self, spec: LstmSpec):
        super().__init__()
        self.lstm = nn.LSTM(
            input_size=spec.d_in,
            hidden_size=spec.hidden,
            num_layers=spec.layers,
            batch_first=True,
        )
        self.head = nn.Linear(spec.hidden, spec.d_out)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        out, _ = self.lstm(x)
        # Scaled displacement from the window's anchor (newest) position.
        return self.head(out[:, -1, :])


def train(spec: LstmSpec, segments: SegmentSet, seed: int, artifact_path) -> dict:
    """Fit the predictor and save a self-contained artifact file.

    Returns a summary dict with the loss curve.  Standardization uses the
    training set's position mean/std (shared across x and y so geometry
    is preserved).
    """
    # Model is tiny; on the small CPUs this targets, intra-op threading
    # only adds contention.
    torch.set_num_threads(1)
    torch.manual_seed(seed)
    mean = segments.inputs.reshape(-1, 2).mean(axis=0)
    std = float(segments.inputs.reshape(-1, 2).std())
    std = max(std, 1e-6)

    anchors = segments.inputs[:, -1:, :]
    x = torch.tensor((segments.inputs - anchors) / std, dtype=torch.float32)
    y = torch.tensor((segments.targets - anchors[:, 0, :]) / std, dtype=torch.float32)

    model = MovementLstm(spec)
    optimizer = torch.optim.Adam(model.parameters(), lr=spec.lr)
    loss_fn = nn.MSELoss()
    gen = torch.Generator().manual_seed(seed)

    n = x.shape[0]
    losses = []
    model.train()
    for _ in range(spec.epochs):
        order = torch.randperm(n, generator=gen)
        epoch_loss = 0.0
        for start in range(0, n, spec.batch):
            idx = order[start : start + spec.batch]
            optimizer.zero_grad()
            pred = model(x[idx])
            loss = loss_fn(pred, y[idx])
            loss.backward()
            optimizer.step()
            epoch_loss += float(loss.detach()) * idx.numel()
        losses.append(epoch_loss / n)

    artifact = {
        "spec": asdict(spec),
        "state_dict": model.state_dict(),
        "norm_mean": mean.tolist(),
        "norm_std": std,
        "seed": seed,
        "loss_curve": losses,
        "n_segments": n,
    }
    torch.save(artifact, artifact_path)
    return {"final_loss": losses[-1], "loss_curve": losses, "n_segments": n}


def load_model(artifact_path) -> tuple[MovementLstm, LstmSpec, np.ndarray, float]:
    artifact = torch.load(artifact_path, weights_only=False)
    spec = LstmSpec(**artifact["spec"])
    model = MovementLstm(spec)
    model.load_state_dict(artifact["state_dict"])
    model.eval()
    return model, spec, np.asarray(artifact["norm_mean"]), float(artifact["norm_std"])


def predict_trajectory(
    model: MovementLstm,
    spec: LstmSpec,
    mean: np.ndarray,
    std: float,
    t: np.ndarray,
    xy: np.ndarray,
    min_history_s: float = 2.0,
) -> tuple[np.ndarray, np.ndarray]:
    """One prediction per sample with at least ``min_history_s`` of
    context: the position at sample time + horizon.

    Windows are resampled to the model grid; early samples use
    left-padded (repeated-start) history.
    """
    from .segments import resample_window

    anchor_mask = t - t[0] >= min_history_s
    anchors = t[anchor_mask]
    if anchors.size == 0:
        return np.empty(0), np.empty((0, 2))
    windows = np.stack(
        [resample_window(t, xy, float(a), spec.segment_len_s, spec.grid_hz) for a in anchors]
    )
    anchor_pos = windows[:, -1, :]
    with torch.no_grad():
        x = torch.tensor((windows - anchor_pos[:, None, :]) / std, dtype=torch.float32)
        displacement = model(x).numpy() * std
    return anchors + spec.horizon_s, anchor_pos + displacement

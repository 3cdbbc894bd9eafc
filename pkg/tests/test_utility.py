import math

import numpy as np
import pytest

from fidshare.errors import DataError
from fidshare.trajectory_io import Trajectory
from fidshare.utility import predict_cv, utility_errors


def _line_traj(v=(1.0, 0.0), duration=30.0, hz=10.0, origin=(5.0, 5.0)):
    t = np.arange(0, duration + 1e-9, 1.0 / hz)
    xy = np.asarray(origin) + np.outer(t, np.asarray(v))
    return Trajectory(id="line", t=t, xy=xy)


def test_predict_cv_exact_on_straight_line():
    traj = _line_traj()
    samples = (traj.t[::3], traj.xy[::3])
    pred_t, pred_xy = predict_cv(samples, horizon_s=1.0)
    keep = pred_t <= traj.t[-1]
    np.testing.assert_allclose(pred_xy[keep], traj.interp_xy(pred_t[keep]), atol=1e-12)
    errs = utility_errors(pred_t[keep], pred_xy[keep], traj)
    assert errs.pos_err_1s == pytest.approx(0.0, abs=1e-12)
    assert errs.vel_err == pytest.approx(0.0, abs=1e-12)
    assert errs.heading_err == pytest.approx(0.0, abs=1e-9)


def test_predict_cv_stationary_target():
    t = np.arange(0, 10, 0.5)
    xy = np.tile([2.0, 3.0], (t.size, 1))
    pred_t, pred_xy = predict_cv((t, xy), horizon_s=1.0)
    np.testing.assert_allclose(pred_xy, np.tile([2.0, 3.0], (pred_t.size, 1)))


def test_predict_cv_circle_matches_geometry_oracle():
    # Uniform circular motion: radius 5 m, speed 1 m/s, sampled at 3 Hz.
    radius, speed, dt, horizon = 5.0, 1.0, 1.0 / 3.0, 1.0
    omega = speed / radius
    t = np.arange(0, 40, dt)
    ang = omega * t
    xy = radius * np.column_stack([np.cos(ang), np.sin(ang)])
    pred_t, pred_xy = predict_cv((t, xy), horizon_s=horizon)

    # Closed-form oracle: the chord velocity between the last two samples,
    # carried forward from the newest sample for one second.
    for k in (5, 13, 37, 80):
        chord_v = (xy[k] - xy[k - 1]) / dt
        expected = xy[k] + chord_v * horizon
        np.testing.assert_allclose(pred_xy[k - 1], expected, rtol=1e-12)
    # Its error against the true future position is the chord-vs-arc gap:
    # |P(theta) + h * v_chord - P(theta + omega h)|, identical for every k.
    k = 30
    true_future = radius * np.array(
        [math.cos(ang[k] + omega * horizon), math.sin(ang[k] + omega * horizon)]
    )
    gap = np.linalg.norm(pred_xy[k - 1] - true_future)
    # Independent scalar evaluation of the same geometry.
    chord = 2 * radius * math.sin(omega * dt / 2) / dt
    mid_ang = ang[k] - omega * dt / 2
    tangent = np.array([-math.sin(mid_ang), math.cos(mid_ang)])
    oracle = np.linalg.norm(
        radius * np.array([math.cos(ang[k]), math.sin(ang[k])])
        + chord * tangent * horizon
        - true_future
    )
    assert gap == pytest.approx(oracle, rel=1e-12)
    assert 0.05 < gap < 0.5  # small chord-vs-tangent gap at this curvature


def test_predict_cv_needs_two_samples():
    with pytest.raises(DataError):
        predict_cv((np.array([0.0]), np.zeros((1, 2))), 1.0)


def test_utility_errors_90_degree_rotation():
    # Predictions move north while the truth moves east at the same speed.
    t = np.arange(0, 20, 0.5)
    truth = Trajectory(id="t", t=t, xy=np.column_stack([t, np.zeros_like(t)]))
    pred_t = t[2:12]
    start = truth.interp_xy(pred_t[:1])[0]
    pred_xy = start + np.column_stack(
        [np.zeros(pred_t.size), (pred_t - pred_t[0])]
    )
    errs = utility_errors(pred_t, pred_xy, truth)
    assert errs.vel_err == pytest.approx(0.0, abs=1e-12)
    assert errs.heading_err == pytest.approx(90.0, abs=1e-9)


def test_utility_errors_match_per_sample_oracle():
    rng = np.random.default_rng(1)
    traj = _line_traj(v=(0.8, 0.4))
    pred_t = np.arange(2.0, 25.0, 0.4)
    pred_xy = traj.interp_xy(pred_t) + rng.normal(0, 0.3, (pred_t.size, 2))
    errs = utility_errors(pred_t, pred_xy, traj)

    truth_xy = traj.interp_xy(pred_t)
    pos_oracle = np.mean(np.linalg.norm(pred_xy - truth_xy, axis=1))
    dt = np.diff(pred_t)
    vp = np.diff(pred_xy, axis=0) / dt[:, None]
    vt = np.diff(truth_xy, axis=0) / dt[:, None]
    sp, st_ = np.linalg.norm(vp, axis=1), np.linalg.norm(vt, axis=1)
    vel_oracle = np.mean(np.abs(sp - st_))
    ang = []
    for a, b in zip(vp, vt):
        cos = np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b))
        ang.append(math.degrees(math.acos(max(-1.0, min(1.0, cos)))))
    assert errs.pos_err_1s == pytest.approx(pos_oracle, rel=1e-12)
    assert errs.vel_err == pytest.approx(vel_oracle, rel=1e-12)
    assert errs.heading_err == pytest.approx(np.mean(ang), rel=1e-12)


def test_utility_invariant_under_translation_and_rotation():
    rng = np.random.default_rng(2)
    traj = _line_traj(v=(1.2, -0.3))
    pred_t = np.arange(1.5, 20.0, 0.5)
    pred_xy = traj.interp_xy(pred_t) + rng.normal(0, 0.2, (pred_t.size, 2))
    base = utility_errors(pred_t, pred_xy, traj)

    shift = np.array([17.0, -4.0])
    theta = 0.7
    rot = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    traj2 = Trajectory(id="m", t=traj.t, xy=traj.xy @ rot.T + shift)
    moved = utility_errors(pred_t, pred_xy @ rot.T + shift, traj2)
    assert moved.pos_err_1s == pytest.approx(base.pos_err_1s, rel=1e-9)
    assert moved.vel_err == pytest.approx(base.vel_err, rel=1e-9)
    assert moved.heading_err == pytest.approx(base.heading_err, rel=1e-9)


def test_noise_cannot_improve_linear_motion_prediction():
    # One-sided Monte Carlo check: zero-mean noise on the shared samples
    # can only increase the expected 1 s position error of the
    # constant-velocity predictor when the motion is exactly linear.
    rng = np.random.default_rng(3)
    traj = _line_traj(v=(1.0, 0.5))
    t = traj.t[::4]
    clean_xy = traj.interp_xy(t)
    pred_t, pred_xy = predict_cv((t, clean_xy), 1.0)
    keep = pred_t <= traj.t[-1]
    clean_err = utility_errors(pred_t[keep], pred_xy[keep], traj).pos_err_1s
    noisy_errs = []
    for _ in range(10_000 // 25):
        noisy = clean_xy + rng.normal(0, 0.2, clean_xy.shape)
        p_t, p_xy = predict_cv((t, noisy), 1.0)
        noisy_errs.append(utility_errors(p_t[keep], p_xy[keep], traj).pos_err_1s)
    assert np.mean(noisy_errs) > clean_err


def test_heading_excluded_below_speed_floor():
    # Truth crawls at 0.05 m/s: heading is undefined, reported as zero.
    t = np.arange(0, 30, 0.5)
    xy = np.column_stack([0.05 * t, np.zeros_like(t)])
    traj = Trajectory(id="slow", t=t, xy=xy)
    pred_t = t[4:20]
    rng = np.random.default_rng(4)
    pred_xy = traj.interp_xy(pred_t) + rng.normal(0, 0.05, (pred_t.size, 2))
    errs = utility_errors(pred_t, pred_xy, traj, min_heading_speed=0.1)
    assert errs.heading_err == 0.0

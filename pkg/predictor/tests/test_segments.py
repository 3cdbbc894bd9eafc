import numpy as np
import pytest

from trajpredict.segments import (
    make_segments,
    read_trajectory_csv,
    resample_window,
    split_by_trajectory,
)


def _linear_traj(v=(1.0, 0.5), duration=30.0, hz=3.0, origin=(10.0, 20.0)):
    t = np.arange(0, duration + 1e-9, 1.0 / hz)
    return t, np.asarray(origin) + np.outer(t, v)


def test_read_trajectory_csv_truth_and_shared(tmp_path):
    truth = tmp_path / "truth.csv"
    truth.write_text("traj_id,t,x,y\nb,1.0,3.0,4.0\nb,0.5,1.0,2.0\na,0.0,0.0,0.0\na,0.4,1.0,1.0\n")
    out = read_trajectory_csv(truth)
    assert set(out) == {"a", "b"}
    np.testing.assert_allclose(out["b"][0], [0.5, 1.0])  # sorted by time
    shared = tmp_path / "shared.csv"
    shared.write_text(
        "traj_id,t,x,y,fid,dsigma,scheme\ns,0.0,1.0,2.0,10.0,0.0,none\ns,0.5,2.0,3.0,11.0,0.1,none\n"
    )
    out = read_trajectory_csv(shared)
    assert out["s"][1].shape == (2, 2)


def test_read_trajectory_csv_rejects_wrong_columns(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("id,time,x,y\n1,0,0,0\n")
    with pytest.raises(ValueError, match="expected columns"):
        read_trajectory_csv(bad)


def test_resample_window_grid_and_padding():
    t, xy = _linear_traj()
    win = resample_window(t, xy, t_end=15.0, window_s=12.0, grid_hz=3.0)
    assert win.shape == (36, 2)
    # Grid ends exactly at t_end and steps back at 1/3 s.
    np.testing.assert_allclose(win[-1], xy[np.isclose(t, 15.0)][0])
    t_first = 15.0 - 35 / 3.0
    np.testing.assert_allclose(
        win[0],
        [np.interp(t_first, t, xy[:, 0]), np.interp(t_first, t, xy[:, 1])],
        atol=1e-9,
    )
    # Early anchor: steps before t=0 repeat the first position.
    win0 = resample_window(t, xy, t_end=2.0, window_s=12.0, grid_hz=3.0)
    np.testing.assert_allclose(win0[0], xy[0])


def test_make_segments_target_is_one_second_ahead():
    t, xy = _linear_traj(v=(0.8, -0.2))
    segs = make_segments({"a": (t, xy)}, segment_len_s=12.0, horizon_s=1.0,
                         grid_hz=3.0, stride_s=1.0)
    assert segs.inputs.shape[1:] == (36, 2)
    # For linear motion the target is the window anchor plus v * 1 s.
    for k in range(len(segs)):
        np.testing.assert_allclose(
            segs.targets[k], segs.inputs[k, -1] + np.array([0.8, -0.2]), atol=1e-9
        )
    # Window count: anchors at 12, 13, ..., 29 (need 1 s of future).
    assert len(segs) == 18


def test_make_segments_budget_is_deterministic():
    rng = np.random.default_rng(3)
    trajs = {}
    for i in range(6):
        t = np.arange(0, 40, 0.25)
        xy = np.cumsum(rng.normal(0, 0.1, (t.size, 2)), axis=0) + 20
        trajs[f"r{i}"] = (t, xy)
    a = make_segments(trajs, target_count=50, seed=9)
    b = make_segments(trajs, target_count=50, seed=9)
    assert len(a) == len(b) == 50
    np.testing.assert_array_equal(a.inputs, b.inputs)
    assert a.traj_ids == b.traj_ids


def test_make_segments_needs_long_enough_trajectories():
    t, xy = _linear_traj(duration=8.0)
    with pytest.raises(ValueError, match="no segments"):
        make_segments({"short": (t, xy)})


def test_split_by_trajectory():
    trajs = {f"t{i}": _linear_traj(origin=(i, i)) for i in range(20)}
    train, val = split_by_trajectory(trajs, val_frac=0.1, seed=4)
    assert len(val) == 2 and len(train) == 18
    assert set(train) | set(val) == set(trajs)
    assert not set(train) & set(val)
    train2, val2 = split_by_trajectory(trajs, val_frac=0.1, seed=4)
    assert set(val) == set(val2)

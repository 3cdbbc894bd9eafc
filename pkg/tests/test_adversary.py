import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fidshare.adversary import (
    LeakageSegment,
    leakage_report,
    reconstruct_smooth,
    reconstruction_error,
)
from fidshare.errors import DataError


def brute_force_report(leaked, timestamps):
    """Independent run scanner used as the oracle for leakage_report."""
    runs = []
    current = []
    for i, flag in enumerate(leaked):
        if flag:
            current.append(i)
        elif current:
            runs.append(current)
            current = []
    if current:
        runs.append(current)
    plr = sum(len(r) for r in runs) / len(leaked)
    durations = [timestamps[r[-1]] - timestamps[r[0]] for r in runs]
    avg = sum(durations) / len(durations) if durations else 0.0
    mx = max(durations) if durations else 0.0
    return plr, runs, avg, mx


def test_smooth_window_one_is_identity():
    xy = np.random.default_rng(0).normal(size=(12, 2))
    np.testing.assert_array_equal(reconstruct_smooth(xy, 1), xy)


def test_smooth_constant_positions():
    xy = np.tile([3.0, -4.0], (9, 1))
    np.testing.assert_allclose(reconstruct_smooth(xy, 7), xy)


def test_smooth_matches_sliding_mean_oracle():
    rng = np.random.default_rng(1)
    xy = rng.normal(size=(9, 2))
    out = reconstruct_smooth(xy, 7)
    # Oracle: direct windowed mean with symmetric truncation at the ends.
    for i in range(9):
        h = min(3, i, 8 - i)
        np.testing.assert_allclose(out[i], xy[i - h : i + h + 1].mean(axis=0), rtol=1e-12)


def test_smooth_rejects_bad_input():
    with pytest.raises(DataError):
        reconstruct_smooth(np.empty((0, 2)), 7)
    with pytest.raises(DataError):
        reconstruct_smooth(np.zeros((5, 2)), 4)


def test_reconstruction_error_basics():
    a = np.arange(10.0).reshape(5, 2)
    assert reconstruction_error(a, a).tolist() == [0.0] * 5
    np.testing.assert_allclose(reconstruction_error(a + [3.0, 4.0], a), 5.0)


def test_reconstruction_error_matches_norm_oracle():
    rng = np.random.default_rng(2)
    a, b = rng.normal(size=(20, 2)), rng.normal(size=(20, 2))
    errs = reconstruction_error(a, b)
    for i in range(20):
        dx, dy = a[i] - b[i]
        assert errs[i] == pytest.approx((dx * dx + dy * dy) ** 0.5, rel=1e-12)
    with pytest.raises(DataError):
        reconstruction_error(a, b[:10])


def test_leakage_report_counting():
    errors = np.array([0.1, 0.5, 0.2, 0.9, 0.25, 0.7, 0.8, 0.6, 0.4, 0.5])
    t = np.arange(10) / 3.0
    rep = leakage_report(errors, t, epsilon=0.3)
    assert rep.plr == pytest.approx(0.3)


def test_leakage_report_no_leaks():
    errors = np.full(8, 1.0)
    rep = leakage_report(errors, np.arange(8.0), epsilon=0.3)
    assert rep.plr == 0.0 and rep.avg_leak_s == 0.0 and rep.max_leak_s == 0.0
    assert rep.segments == ()


def test_leakage_run_duration_at_three_hz():
    # 7 consecutive leaked points at 3 samples/s: duration (7 - 1) / 3 = 2 s.
    leaked = np.array([1.0, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 1.0])
    t = np.arange(9) / 3.0
    rep = leakage_report(leaked, t, epsilon=0.3)
    assert len(rep.segments) == 1
    assert rep.segments[0].n_points == 7
    assert rep.max_leak_s == pytest.approx(2.0)
    assert rep.avg_leak_s == pytest.approx(2.0)


def test_single_point_segment_has_zero_duration():
    errors = np.array([1.0, 0.1, 1.0])
    rep = leakage_report(errors, np.arange(3.0), epsilon=0.3)
    assert rep.segments == (LeakageSegment(t_start=1.0, t_end=1.0, n_points=1),)
    assert rep.max_leak_s == 0.0


@settings(max_examples=300, deadline=None)
@given(st.lists(st.booleans(), min_size=1, max_size=20), st.integers(0, 2**31))
def test_leakage_matches_brute_force_scanner(pattern, seed):
    rng = np.random.default_rng(seed)
    eps = 0.3
    errors = np.where(pattern, rng.uniform(0, eps, len(pattern)),
                      rng.uniform(eps * 1.001, 10 * eps, len(pattern)))
    t = np.cumsum(rng.uniform(0.25, 0.5, len(pattern)))
    rep = leakage_report(errors, t, eps)
    plr, runs, avg, mx = brute_force_report(list(pattern), list(t))
    assert rep.plr == pytest.approx(plr)
    assert [s.n_points for s in rep.segments] == [len(r) for r in runs]
    assert rep.avg_leak_s == pytest.approx(avg)
    assert rep.max_leak_s == pytest.approx(mx)


def test_plr_invariant_under_time_reversal():
    rng = np.random.default_rng(3)
    errors = rng.uniform(0, 1, 50)
    t = np.cumsum(rng.uniform(0.2, 0.5, 50))
    fwd = leakage_report(errors, t, 0.3)
    rev = leakage_report(errors[::-1], np.sort(t.max() - t), 0.3)
    assert fwd.plr == rev.plr
    assert fwd.max_leak_s == pytest.approx(rev.max_leak_s)


def test_plr_monotone_in_epsilon():
    rng = np.random.default_rng(4)
    errors = rng.uniform(0, 1, 200)
    t = np.arange(200) / 3.0
    plrs = [leakage_report(errors, t, eps).plr for eps in (0.1, 0.3, 0.5, 0.9)]
    assert plrs == sorted(plrs)


def test_segments_partition_leaked_points():
    rng = np.random.default_rng(5)
    errors = rng.uniform(0, 0.6, 100)
    t = np.arange(100) / 3.0
    rep = leakage_report(errors, t, 0.3)
    assert sum(s.n_points for s in rep.segments) == round(rep.plr * 100)
    # ordered and disjoint
    for a, b in zip(rep.segments, rep.segments[1:]):
        assert a.t_end < b.t_start

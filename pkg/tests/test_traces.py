import math

import numpy as np
import pytest

from vrpl import (
    ErrorSample,
    GreatCircleDrift,
    Predictor,
    RandomWalk,
    TraceFormatError,
    ViewpointTrace,
    WindowingConfig,
    generate_synthetic_traces,
    load_traces,
    predict,
    predict_all,
    save_traces,
    spherical_distance,
)

WIN = WindowingConfig(t_obw=1.0, t_cc=1.0, t_pdw=1.0, sample_rate=5.0, passive_prefix=2)


def _write(tmp_path, text: str):
    p = tmp_path / "traces.csv"
    p.write_text(text, encoding="utf-8")
    return p


HEADER = "user_id,video_id,timestamp_s,theta_rad,phi_rad\n"


def test_load_basic(tmp_path):
    rows = "".join(
        f"u1,v1,{i * 0.2},{0.01 * i},{0.005 * i}\n" for i in range(300)
    )
    traces = load_traces(_write(tmp_path, HEADER + rows))
    assert len(traces) == 1
    tr = traces[0]
    assert (tr.user_id, tr.video_id) == ("u1", "v1")
    assert len(tr) == 300
    assert tr.sample_rate == pytest.approx(5.0, abs=1e-9)


def test_load_groups_consecutive_keys(tmp_path):
    text = HEADER + (
        "a,v,0.0,0.0,0.0\n"
        "a,v,0.2,0.1,0.0\n"
        "b,v,0.0,0.0,0.0\n"
        "b,v,0.2,0.1,0.0\n"
        "a,v,0.0,0.0,0.0\n"
        "a,v,0.2,0.1,0.0\n"
    )
    traces = load_traces(_write(tmp_path, text))
    # A key that reappears later starts a fresh trace.
    assert [(t.user_id, t.video_id) for t in traces] == [("a", "v"), ("b", "v"), ("a", "v")]


def test_load_rejects_bad_header(tmp_path):
    with pytest.raises(TraceFormatError, match="header"):
        load_traces(_write(tmp_path, "user,video,t,theta,phi\nu,v,0,0,0\n"))


def test_load_rejects_empty(tmp_path):
    with pytest.raises(TraceFormatError, match="zero traces"):
        load_traces(_write(tmp_path, ""))
    with pytest.raises(TraceFormatError, match="zero traces"):
        load_traces(_write(tmp_path, HEADER))


def test_load_rejects_bad_latitude_with_line(tmp_path):
    text = HEADER + "u,v,0.0,0.0,0.0\nu,v,0.2,0.0,0.0\nu,v,0.4,0.0,2.0\n"
    with pytest.raises(TraceFormatError, match=":4:"):
        load_traces(_write(tmp_path, text))


def test_load_rejects_non_numeric_with_line(tmp_path):
    text = HEADER + "u,v,0.0,0.0,0.0\nu,v,abc,0.0,0.0\n"
    with pytest.raises(TraceFormatError, match=":3:"):
        load_traces(_write(tmp_path, text))


def test_load_rejects_column_mismatch(tmp_path):
    text = HEADER + "u,v,0.0,0.0\n"
    with pytest.raises(TraceFormatError, match="columns"):
        load_traces(_write(tmp_path, text))


def test_load_rejects_non_monotone_time(tmp_path):
    text = HEADER + "u,v,0.0,0.0,0.0\nu,v,0.2,0.0,0.0\nu,v,0.2,0.1,0.0\n"
    with pytest.raises(TraceFormatError, match="increasing"):
        load_traces(_write(tmp_path, text))


def test_trace_validation():
    with pytest.raises(TraceFormatError, match="fewer than 2"):
        ViewpointTrace("u", "v", np.array([0.0]), np.array([0.0]), np.array([0.0]))
    with pytest.raises(TraceFormatError, match="non-uniform"):
        ViewpointTrace(
            "u",
            "v",
            np.array([0.0, 0.2, 0.5]),
            np.zeros(3),
            np.zeros(3),
        )
    tr = ViewpointTrace("u", "v", np.array([0.0, 0.2]), np.array([4.0, 0.0]), np.zeros(2))
    # Longitudes are normalized into [-pi, pi).
    assert tr.theta[0] == pytest.approx(4.0 - 2.0 * math.pi, abs=1e-12)
    assert not tr.theta.flags.writeable


def test_save_load_round_trip(tmp_path):
    traces = generate_synthetic_traces(RandomWalk(kappa=100.0), 3, 10.0, 5.0, seed=4)
    p = tmp_path / "out.csv"
    save_traces(p, traces)
    back = load_traces(p)
    assert len(back) == 3
    for a, b in zip(traces, back):
        assert (a.user_id, a.video_id) == (b.user_id, b.video_id)
        np.testing.assert_allclose(a.timestamps, b.timestamps, atol=0)
        np.testing.assert_allclose(a.theta, b.theta, atol=0)
        np.testing.assert_allclose(a.phi, b.phi, atol=0)


def test_synthetic_deterministic():
    a = generate_synthetic_traces(RandomWalk(kappa=50.0), 2, 10.0, 5.0, seed=9)
    b = generate_synthetic_traces(RandomWalk(kappa=50.0), 2, 10.0, 5.0, seed=9)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x.theta, y.theta)
        np.testing.assert_array_equal(x.phi, y.phi)
    c = generate_synthetic_traces(RandomWalk(kappa=50.0), 2, 10.0, 5.0, seed=10)
    assert not np.array_equal(a[0].theta, c[0].theta)


def test_synthetic_ids_and_length():
    traces = generate_synthetic_traces(GreatCircleDrift(rate=0.1), 3, 12.0, 5.0, seed=0)
    assert [t.user_id for t in traces] == ["synthetic-000", "synthetic-001", "synthetic-002"]
    assert all(t.video_id == "greatcircledrift" for t in traces)
    assert all(len(t) == 60 for t in traces)


def test_synthetic_validation():
    with pytest.raises(ValueError):
        generate_synthetic_traces(RandomWalk(kappa=10.0), 0, 10.0, 5.0, seed=0)
    with pytest.raises(ValueError):
        generate_synthetic_traces(RandomWalk(kappa=10.0), 1, 10.3, 5.0, seed=0)
    with pytest.raises(ValueError):
        RandomWalk(kappa=0.0)
    with pytest.raises(ValueError):
        GreatCircleDrift(rate=-0.1)


def test_random_walk_step_size():
    # Very high concentration keeps consecutive samples close together.
    (tr,) = generate_synthetic_traces(RandomWalk(kappa=1e6), 1, 20.0, 5.0, seed=3)
    for i in range(len(tr) - 1):
        assert spherical_distance(tr.point(i), tr.point(i + 1)) < 0.01


def test_drift_step_size_exact():
    (tr,) = generate_synthetic_traces(GreatCircleDrift(rate=0.1), 1, 20.0, 5.0, seed=3)
    for i in range(len(tr) - 1):
        d = spherical_distance(tr.point(i), tr.point(i + 1))
        assert d == pytest.approx(0.02, abs=1e-9)


def test_windowing_validation():
    assert WIN.samples_per_segment == 5
    assert WIN.obw_samples == 5
    assert WIN.cc_samples == 5
    with pytest.raises(ValueError, match="t_obw \\+ t_cc"):
        WindowingConfig(t_obw=1.0, t_cc=0.5, t_pdw=1.0, sample_rate=5.0, passive_prefix=2)
    with pytest.raises(ValueError, match="whole number"):
        WindowingConfig(t_obw=0.33, t_cc=0.33, t_pdw=0.33, sample_rate=5.0, passive_prefix=2)
    with pytest.raises(ValueError):
        WindowingConfig(t_obw=1.0, t_cc=1.0, t_pdw=1.0, sample_rate=5.0, passive_prefix=0)


def test_predict_sample_count():
    (tr,) = generate_synthetic_traces(RandomWalk(kappa=100.0), 1, 60.0, 5.0, seed=1)
    samples = predict(tr, WIN, Predictor.LAST_POSITION)
    # 60 segments of 5 samples, the first two played passively.
    assert len(samples) == 290
    assert samples[0].segment == 2 and samples[0].frame == 0
    assert samples[-1].segment == 59 and samples[-1].frame == 4
    assert all(0.0 <= s.error <= math.pi for s in samples)


def test_predict_drops_trailing_partial_segment():
    (tr,) = generate_synthetic_traces(RandomWalk(kappa=100.0), 1, 61.4, 5.0, seed=1)
    samples = predict(tr, WIN, Predictor.LAST_POSITION)
    # 307 samples hold 61 whole segments; 59 of them are predicted.
    assert len(samples) == 295


def test_predict_constant_trace_zero_error():
    n = 150
    tr = ViewpointTrace(
        "u", "v", np.arange(n) / 5.0, np.full(n, 0.3), np.full(n, -0.2)
    )
    for predictor in Predictor:
        samples = predict(tr, WIN, predictor)
        assert all(s.error == 0.0 for s in samples)


def test_predict_last_position_lead_error():
    # Under steady drift the repeated last point lags by the lead time:
    # the k-th frame of a predicted segment sits (cc_samples + k + 1)
    # sample periods past the last observed sample.
    (tr,) = generate_synthetic_traces(GreatCircleDrift(rate=0.1), 1, 60.0, 5.0, seed=5)
    samples = predict(tr, WIN, Predictor.LAST_POSITION)
    per_step = 0.1 / 5.0
    for s in samples[:25]:
        expected = (WIN.cc_samples + s.frame + 1) * per_step
        assert s.error == pytest.approx(expected, abs=1e-9)
    assert max(s.error for s in samples) == pytest.approx(0.2, abs=1e-9)


def test_predict_great_circle_tracks_drift():
    (tr,) = generate_synthetic_traces(GreatCircleDrift(rate=0.1), 1, 60.0, 5.0, seed=5)
    samples = predict(tr, WIN, Predictor.GREAT_CIRCLE)
    assert max(s.error for s in samples) < 1e-6


def test_predict_rate_mismatch():
    (tr,) = generate_synthetic_traces(RandomWalk(kappa=100.0), 1, 60.0, 4.0, seed=1)
    with pytest.raises(TraceFormatError, match="rate"):
        predict(tr, WIN, Predictor.LAST_POSITION)


def test_predict_short_trace():
    tr = ViewpointTrace("u", "v", np.arange(14) / 5.0, np.zeros(14), np.zeros(14))
    with pytest.raises(TraceFormatError, match="needs at least"):
        predict(tr, WIN, Predictor.LAST_POSITION)


def test_predict_all_concatenates_in_order():
    traces = generate_synthetic_traces(RandomWalk(kappa=100.0), 3, 60.0, 5.0, seed=2)
    all_samples = predict_all(traces, WIN, Predictor.LAST_POSITION)
    assert len(all_samples) == 3 * 290
    assert [s.user_id for s in all_samples[::290]] == [
        "synthetic-000",
        "synthetic-001",
        "synthetic-002",
    ]
    solo = predict(traces[1], WIN, Predictor.LAST_POSITION)
    assert all_samples[290:580] == solo

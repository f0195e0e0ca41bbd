import numpy as np
import pytest

from qcaclock.schedule import (
    KINDS,
    Schedule,
    ScheduleError,
    default_sigma,
    parse_schedule,
    smooth_map,
)


@pytest.mark.parametrize("kind", KINDS)
def test_endpoint_ratios(kind):
    sched = Schedule(kind)
    a0, b0 = sched.evaluate(0.0)
    a1, b1 = sched.evaluate(1.0)
    assert a0 / b0 == pytest.approx(sched.alpha0, rel=1e-12)
    assert a1 / b1 == pytest.approx(sched.alpha1, rel=1e-12)


def test_linear_forms():
    sched = Schedule("linear")
    a, b = sched.evaluate(0.0)
    assert (a, b) == pytest.approx((1.0, 1.0 / 5.0))
    a, b = sched.evaluate(1.0)
    assert (a, b) == pytest.approx((0.05, 1.0))
    a, b = sched.evaluate(0.5)
    assert a == pytest.approx(1.0 - 0.95 * 0.5)


def test_quasi_crossing():
    sched = Schedule("quasi")
    s_cross = 1.0 / sched.crossing_parameter
    a, b = sched.evaluate(s_cross)
    assert a == pytest.approx(b, rel=1e-10)
    # the quasi-linear profile keeps the problem term fully on
    assert sched.evaluate(0.3)[1] == pytest.approx(1.0)


def test_sinus_monotone():
    sched = Schedule("sinus")
    s = np.linspace(0, 1, 101)
    a, _ = sched.evaluate(s)
    assert np.all(np.diff(a) < 0)


@pytest.mark.parametrize("kind", KINDS)
def test_derivative_matches_finite_difference(kind):
    sched = Schedule(kind, smoothing_sigma=0.05)
    eps = 1e-7
    for s in (0.1, 0.33, 0.72):
        da, db = sched.derivative(s)
        ap, bp = sched.evaluate(s + eps)
        am, bm = sched.evaluate(s - eps)
        assert da == pytest.approx((ap - am) / (2 * eps), abs=1e-5)
        assert db == pytest.approx((bp - bm) / (2 * eps), abs=1e-5)


def test_smoothing_map_properties():
    sigma = 0.1
    assert smooth_map(0.0, sigma) == 0.0
    assert smooth_map(1.0, sigma) == pytest.approx(1.0, abs=1e-12)
    # the map suppresses early times
    assert smooth_map(0.05, sigma) < 0.05


def test_with_smoothing_uses_runrate():
    sched = Schedule("quasi").with_smoothing(2e-2)
    assert sched.smoothing_sigma == pytest.approx(default_sigma(2e-2, 5.0))


def test_parse_aliases_and_errors():
    assert parse_schedule("Quasi-Linear").kind == "quasi"
    assert parse_schedule("sinusoidal").kind == "sinus"
    assert parse_schedule("linear", smoothing=0.1).smoothing_sigma == 0.1
    with pytest.raises(ScheduleError):
        parse_schedule("cubic")
    with pytest.raises(ScheduleError):
        Schedule("linear", alpha0=0.5)
    with pytest.raises(ScheduleError):
        Schedule("linear", alpha1=2.0)
    with pytest.raises(ScheduleError):
        Schedule("linear").evaluate(1.5)

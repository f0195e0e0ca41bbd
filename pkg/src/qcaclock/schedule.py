"""Clocking schedules A(s), B(s) and the initial-oscillation smoothing map.

All three schedule families are parametrized by the initial and final
tunneling-to-problem ratios alpha0 = A(0)/B(0) and alpha1 = A(1)/B(1).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

KINDS = ("linear", "quasi", "sinus")


class ScheduleError(ValueError):
    pass


def smooth_map(s, sigma: float):
    """Reparametrization s' = s (1 - exp(-s^2 / 2 sigma^2)).

    Leaves s = 0 fixed, kills the linear component at the origin and is the
    identity a few sigma in.
    """
    s = np.asarray(s, dtype=float)
    out = s * (1.0 - np.exp(-(s ** 2) / (2.0 * sigma ** 2)))
    return float(out) if out.ndim == 0 else out


def _smooth_deriv(s, sigma: float):
    s = np.asarray(s, dtype=float)
    e = np.exp(-(s ** 2) / (2.0 * sigma ** 2))
    return 1.0 - e + (s ** 2 / sigma ** 2) * e


def default_sigma(runrate: float, a0: float) -> float:
    """Smoothing width covering two periods of the initial oscillations."""
    return 2.0 * 2.0 * np.pi * runrate / a0


@dataclass(frozen=True)
class Schedule:
    """Clocking schedule with optional initial smoothing.

    ``kind`` is one of ``linear``, ``quasi`` (quasi-linear) or ``sinus``
    (sinusoidal).  ``smoothing_sigma`` = 0 disables smoothing.
    """

    kind: str
    alpha0: float = 5.0
    alpha1: float = 1.0 / 20.0
    smoothing_sigma: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ScheduleError(f"unknown schedule kind {self.kind!r}")
        if not self.alpha0 > 1.0:
            raise ScheduleError("alpha0 must exceed 1")
        if not 0.0 < self.alpha1 < 1.0:
            raise ScheduleError("alpha1 must lie in (0, 1)")
        if self.smoothing_sigma < 0.0:
            raise ScheduleError("smoothing sigma must be nonnegative")

    @property
    def crossing_parameter(self) -> float:
        """k such that the linear schedule crosses A = B at s = 1/k."""
        return 1.0 + (1.0 - self.alpha1) / (1.0 - 1.0 / self.alpha0)

    def with_smoothing(self, runrate: float) -> "Schedule":
        """Copy with the default smoothing width for a given switching rate."""
        a0 = self.evaluate(0.0)[0]
        return replace(self, smoothing_sigma=default_sigma(runrate, a0))

    def _check(self, s):
        if np.any(np.asarray(s) < -1e-12) or np.any(np.asarray(s) > 1.0 + 1e-12):
            raise ScheduleError("s outside [0, 1]")

    def _raw(self, s):
        a0, a1 = self.alpha0, self.alpha1
        s = np.asarray(s, dtype=float)
        if self.kind == "linear":
            return 1.0 - (1.0 - a1) * s, 1.0 - (1.0 - 1.0 / a0) * (1.0 - s)
        if self.kind == "quasi":
            k = self.crossing_parameter
            return 1.0 + (a0 - 1.0) * (1.0 - k * s) / (1.0 + (a0 - 1.0) * s), np.ones_like(s)
        a = (a0 - a1) / np.sqrt(2.0) * np.cos(np.pi / 2.0 * (s + 0.5)) + (a0 + a1) / 2.0
        return a, np.ones_like(s)

    def _raw_deriv(self, s):
        a0, a1 = self.alpha0, self.alpha1
        s = np.asarray(s, dtype=float)
        if self.kind == "linear":
            return np.full_like(s, -(1.0 - a1)), np.full_like(s, 1.0 - 1.0 / a0)
        if self.kind == "quasi":
            k = self.crossing_parameter
            u = 1.0 + (a0 - 1.0) * s
            da = (a0 - 1.0) * (-k * u - (1.0 - k * s) * (a0 - 1.0)) / u ** 2
            return da, np.zeros_like(s)
        da = -(a0 - a1) / np.sqrt(2.0) * (np.pi / 2.0) * np.sin(np.pi / 2.0 * (s + 0.5))
        return da, np.zeros_like(s)

    def evaluate(self, s):
        """(A, B) at normalized time s, after smoothing when enabled."""
        self._check(s)
        sp = smooth_map(s, self.smoothing_sigma) if self.smoothing_sigma > 0 else s
        a, b = self._raw(sp)
        return (float(a), float(b)) if np.asarray(s).ndim == 0 else (a, b)

    def derivative(self, s):
        """(dA/ds, dB/ds), with the chain rule through the smoothing map."""
        self._check(s)
        if self.smoothing_sigma > 0:
            sp = smooth_map(s, self.smoothing_sigma)
            dsp = _smooth_deriv(s, self.smoothing_sigma)
        else:
            sp, dsp = s, 1.0
        da, db = self._raw_deriv(sp)
        da, db = da * dsp, db * dsp
        return (float(da), float(db)) if np.asarray(s).ndim == 0 else (da, db)

    def ratio(self, s):
        a, b = self.evaluate(s)
        return a / b


def parse_schedule(kind: str, alpha0: float = 5.0, alpha1: float = 0.05,
                   smoothing: str | float = "off") -> Schedule:
    """Schedule from CLI/config values; ``smoothing`` is 'off', 'auto' or a
    numeric sigma.  'auto' is resolved later against the run rate via
    :meth:`Schedule.with_smoothing` and yields sigma = 0 here."""
    aliases = {"linear": "linear", "quasi": "quasi", "quasilinear": "quasi",
               "quasi-linear": "quasi", "sinus": "sinus", "sinusoidal": "sinus"}
    try:
        key = aliases[kind.lower()]
    except KeyError:
        raise ScheduleError(f"unknown schedule kind {kind!r}") from None
    if smoothing in ("off", "auto"):
        sigma = 0.0
    else:
        sigma = float(smoothing)
    return Schedule(key, alpha0, alpha1, sigma)

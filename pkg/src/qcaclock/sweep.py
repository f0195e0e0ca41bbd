"""Batch orchestration: frequency sweeps, 2-D maps, threshold contours and
wire-length scaling fits.

Every grid point is an independent clocked run, so batches parallelize over
a process pool; results are collected in submission order to keep output
files deterministic.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import analysis
from .devices import wire
from .icha import evolve_icha
from .lvn import DissipationSpec, evolve, run_metric
from .network import QcaNetwork
from .schedule import Schedule

THRESHOLD = 0.99
REFINE_RTOL = 1e-3
ENGINES = ("dense", "icha")


class SweepError(RuntimeError):
    pass


@dataclass(frozen=True)
class RunSpec:
    """One clocked run: everything needed to evaluate its metrics."""

    net: QcaNetwork
    sched: Schedule
    runrate: float
    dissipation: DissipationSpec = DissipationSpec()
    engine: str = "dense"
    auto_smoothing: bool = True

    def resolved_schedule(self) -> Schedule:
        if self.auto_smoothing and self.sched.smoothing_sigma == 0.0:
            return self.sched.with_smoothing(self.runrate)
        return self.sched


def evaluate_run(spec: RunSpec, metrics: tuple[str, ...]) -> dict[str, float]:
    """Metric values of a single run."""
    sched = spec.resolved_schedule()
    if spec.engine == "icha":
        if any(m != "logical" for m in metrics):
            raise SweepError("the coherence-vector engine only scores the "
                            "logical metric")
        res = evolve_icha(spec.net, sched, spec.runrate, spec.dissipation)
        return {"logical": res.q_logical}
    if spec.engine != "dense":
        raise SweepError(f"unknown engine {spec.engine!r}")
    res = evolve(spec.net, sched, spec.runrate, spec.dissipation,
                 track_adiabatic=False)
    return {m: run_metric(res, m) for m in metrics}


def _eval_star(args):
    return evaluate_run(*args)


def _batch(specs, metrics, workers):
    jobs = [(s, metrics) for s in specs]
    if workers <= 1 or len(jobs) <= 1:
        return [evaluate_run(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_eval_star, jobs))


def default_workers() -> int:
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# Frequency sweeps and maximum switching rates


@dataclass
class FrequencySweep:
    runrates: np.ndarray
    metrics: dict[str, np.ndarray]
    max_rates: dict[str, float]
    threshold: float


def _leftmost_crossing(base: RunSpec, metric: str, rates: np.ndarray,
                       values: np.ndarray, threshold: float,
                       rel_tol: float) -> float:
    """Left-most downward threshold crossing of a scanned metric, refined by
    log-bisection.  NaN when the scan never crosses."""
    above = values >= threshold
    if not above[0]:
        return float("nan")
    idx = None
    for k in range(len(rates) - 1):
        if above[k] and not above[k + 1]:
            idx = k
            break
    if idx is None:
        return float("nan")
    lo, hi = float(rates[idx]), float(rates[idx + 1])
    while hi / lo - 1.0 > rel_tol:
        mid = float(np.sqrt(lo * hi))
        val = evaluate_run(replace(base, runrate=mid), (metric,))[metric]
        if val >= threshold:
            lo = mid
        else:
            hi = mid
    return float(np.sqrt(lo * hi))


def frequency_sweep(net: QcaNetwork, sched: Schedule, runrates,
                    dissipation: DissipationSpec = DissipationSpec(),
                    engine: str = "dense",
                    metrics: tuple[str, ...] = ("adiabatic", "classical", "logical"),
                    threshold: float = THRESHOLD, refine: bool = True,
                    rel_tol: float = REFINE_RTOL, auto_smoothing: bool = True,
                    workers: int = 1) -> FrequencySweep:
    """Metrics versus switching rate, with the maximum rate sustaining each
    metric above the threshold (left-most intercept of the scan)."""
    rates = np.sort(np.asarray(runrates, dtype=float))
    if rates.size < 2:
        raise SweepError("need at least two runrates")
    base = RunSpec(net, sched, rates[0], dissipation, engine, auto_smoothing)
    specs = [replace(base, runrate=float(g)) for g in rates]
    rows = _batch(specs, metrics, workers)
    table = {m: np.array([r[m] for r in rows]) for m in metrics}
    max_rates = {}
    for m in metrics:
        if refine:
            max_rates[m] = _leftmost_crossing(base, m, rates, table[m],
                                              threshold, rel_tol)
        else:
            above = table[m] >= threshold
            k = np.argmax(~above) if not above.all() else None
            max_rates[m] = float("nan") if (k is None or k == 0) \
                else float(np.sqrt(rates[k - 1] * rates[k]))
    return FrequencySweep(rates, table, max_rates, threshold)


# ---------------------------------------------------------------------------
# Two-parameter maps and threshold contours

PARAMETERS = ("runrate", "delta", "beta")


def _apply_params(base: RunSpec, **params) -> RunSpec:
    spec = base
    diss = spec.dissipation
    if "delta" in params:
        diss = replace(diss, rate=float(params["delta"]))
    if "beta" in params:
        diss = replace(diss, beta=float(params["beta"]))
    spec = replace(spec, dissipation=diss)
    if "runrate" in params:
        spec = replace(spec, runrate=float(params["runrate"]))
    return spec


@dataclass
class Map2D:
    x_name: str
    y_name: str
    x: np.ndarray
    y: np.ndarray
    values: np.ndarray  # (len(y), len(x))
    metric: str


def map_2d(net: QcaNetwork, sched: Schedule, x_name: str, x_values,
           y_name: str, y_values, metric: str = "logical",
           dissipation: DissipationSpec = DissipationSpec(),
           engine: str = "dense", runrate: float = 1e-2,
           auto_smoothing: bool = True, workers: int | None = None) -> Map2D:
    """Metric on an outer product of two parameter axes."""
    for name in (x_name, y_name):
        if name not in PARAMETERS:
            raise SweepError(f"unknown sweep parameter {name!r}")
    if x_name == y_name:
        raise SweepError("the two axes must differ")
    x = np.asarray(x_values, dtype=float)
    y = np.asarray(y_values, dtype=float)
    base = RunSpec(net, sched, runrate, dissipation, engine, auto_smoothing)
    specs = [_apply_params(base, **{x_name: xv, y_name: yv})
             for yv in y for xv in x]
    if workers is None:
        workers = default_workers()
    rows = _batch(specs, (metric,), workers)
    vals = np.array([r[metric] for r in rows]).reshape(y.size, x.size)
    return Map2D(x_name, y_name, x, y, vals, metric)


@dataclass
class ContourTrack:
    x_name: str
    y_name: str
    x: np.ndarray
    y_crossing: np.ndarray  # NaN where the threshold is not crossed
    metric: str
    threshold: float


def contour_track(net: QcaNetwork, sched: Schedule, x_name: str, x_values,
                  y_name: str, y_bracket: tuple[float, float],
                  metric: str = "logical",
                  dissipation: DissipationSpec = DissipationSpec(),
                  engine: str = "dense", runrate: float = 1e-2,
                  threshold: float = THRESHOLD, rel_tol: float = REFINE_RTOL,
                  coarse: int = 9, auto_smoothing: bool = True) -> ContourTrack:
    """Trace the threshold contour column by column.

    For each x the bracket is scanned on a coarse log grid and the left-most
    sign change refined by bisection; columns without a crossing yield NaN,
    breaking the contour into segments.
    """
    x = np.asarray(x_values, dtype=float)
    ylo, yhi = y_bracket
    if not 0 < ylo < yhi:
        raise SweepError("y bracket must be positive and increasing")
    base = RunSpec(net, sched, runrate, dissipation, engine, auto_smoothing)
    ys = np.geomspace(ylo, yhi, coarse)
    out = np.full(x.size, np.nan)
    for i, xv in enumerate(x):
        f = lambda yv: evaluate_run(
            _apply_params(base, **{x_name: xv, y_name: yv}),
            (metric,))[metric] - threshold
        vals = [f(yv) for yv in ys]
        for k in range(coarse - 1):
            if vals[k] * vals[k + 1] <= 0 and (vals[k] != 0 or vals[k + 1] != 0):
                lo, hi = float(ys[k]), float(ys[k + 1])
                flo = vals[k]
                while hi / lo - 1.0 > rel_tol:
                    mid = float(np.sqrt(lo * hi))
                    fm = f(mid)
                    if flo * fm <= 0:
                        hi = mid
                    else:
                        lo, flo = mid, fm
                out[i] = float(np.sqrt(lo * hi))
                break
    return ContourTrack(x_name, y_name, x, out, metric, threshold)


# ---------------------------------------------------------------------------
# Wire-length scaling


@dataclass
class WireScaling:
    lengths: np.ndarray
    max_rates: np.ndarray
    nu: float
    nu_2sigma: float
    nu1: float
    kind: str


def _wire_rate_coefficient(n: int, alpha1: float, threshold: float) -> float:
    q1 = 1.0 - alpha1 ** 2 * analysis.wire_quality_param(n)
    return float(-np.pi / (2.0 * np.log(1.0 - threshold / q1) * (n + 1) ** 2))


def wire_scaling_run(lengths, sched: Schedule,
                     metric: str = "classical", threshold: float = THRESHOLD,
                     rel_tol: float = REFINE_RTOL, scan_points: int = 10,
                     workers: int = 1) -> WireScaling:
    """Maximum switching rate versus wire length and the least-squares
    scaling constant nu of the Landau-Zener rate model.

    The scan window for each length is seeded by the single-channel analytic
    prediction so only a handful of runs per length are needed.
    """
    lengths = np.asarray(sorted(lengths), dtype=int)
    if lengths.size < 2:
        raise SweepError("need at least two wire lengths")
    nu1 = analysis.nu1_analytic(sched.kind, sched.alpha0, sched.alpha1)
    gmax = np.empty(lengths.size)
    for i, n in enumerate(lengths):
        pred = analysis.wire_fmax_model(int(n), nu1, sched.alpha1, threshold)
        rates = np.geomspace(pred / 5.0, pred * 2.0, scan_points)
        sw = frequency_sweep(wire(int(n)), sched, rates, metrics=(metric,),
                             threshold=threshold, rel_tol=rel_tol,
                             workers=workers)
        gmax[i] = sw.max_rates[metric]
    if np.any(np.isnan(gmax)):
        raise SweepError("threshold crossing not bracketed for some length; "
                        "widen the scan window")
    c = np.array([_wire_rate_coefficient(int(n), sched.alpha1, threshold)
                  for n in lengths])
    nu = float(np.sum(c * gmax) / np.sum(c * c))
    resid = gmax - c * nu
    dof = max(lengths.size - 1, 1)
    nu_2sig = float(2.0 * np.sqrt(np.sum(resid ** 2) / dof / np.sum(c * c)))
    return WireScaling(lengths, gmax, nu, nu_2sig, nu1, sched.kind)

"""Command line interface.

Subcommands share a device/schedule vocabulary:

    qcaclock device --device Maj-101
    qcaclock spectrum --device Inverter --schedule quasi --out spec.csv
    qcaclock evolve --device Wire-5 --runrate 0.02 --out run.csv --plot
    qcaclock analyze --device Maj-101
    qcaclock sweep-freq --device Wire-5 --rate-min 2e-3 --rate-max 0.3
    qcaclock map2d --device Maj-101 --x delta --y beta ...
    qcaclock contour --device Maj-101 --x delta --y-lo 1e-3 --y-hi 1 ...
    qcaclock wire-scaling --lengths 4 5 6 7 8

Delimited output goes to ``--out`` (stdout by default); ``--plot`` renders a
matching PNG next to the output file.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import analysis, reporting
from .devices import build_device
from .lvn import DissipationSpec, evolve
from .icha import evolve_icha, oscillation_frequency
from .network import classical_ground
from .quantum import fit_min_gap, spectrum_sweep
from .schedule import parse_schedule
from .sweep import (
    contour_track,
    default_workers,
    frequency_sweep,
    map_2d,
    wire_scaling_run,
)


def _add_common(p: argparse.ArgumentParser, device: bool = True) -> None:
    if device:
        # not marked required so a --config file may provide it
        p.add_argument("--device", default=None,
                       help="Wire-N, Inverter, Maj-ABC or a device JSON file")
    p.add_argument("--schedule", default="quasi",
                   help="linear, quasi or sinus (default quasi)")
    p.add_argument("--alpha0", type=float, default=5.0,
                   help="initial tunneling ratio A(0)/B(0)")
    p.add_argument("--alpha1", type=float, default=0.05,
                   help="final tunneling ratio A(1)/B(1)")
    p.add_argument("--smoothing", default="auto",
                   help="'auto' (rate-dependent), 'off' or a numeric width")
    p.add_argument("--out", default="-", help="output file ('-' for stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--plot", action="store_true",
                   help="render a PNG figure next to the output file")


def _add_dissipation(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dissipation", default="none",
                   choices=("none", "boltzmann", "ground", "classical"))
    p.add_argument("--delta", type=float, default=0.0,
                   help="relaxation rate")
    p.add_argument("--beta", type=float, default=0.0,
                   help="inverse temperature (boltzmann dissipation)")


def _schedule(args, auto_off: bool = False):
    smoothing = args.smoothing
    if auto_off and smoothing == "auto":
        smoothing = "off"
    sched = parse_schedule(args.schedule, args.alpha0, args.alpha1, smoothing)
    return sched, (args.smoothing == "auto" and not auto_off)


def _dissipation(args) -> DissipationSpec:
    return DissipationSpec(args.dissipation, args.delta, args.beta)


def _maybe_plot(args, render, *render_args, **kw) -> None:
    if args.plot:
        path = reporting.figure_path(None if args.out == "-" else args.out)
        render(*render_args, path, **kw)
        print(f"figure written to {path}", file=sys.stderr)


def cmd_device(args) -> int:
    net = build_device(args.device)
    ground = classical_ground(net)
    payload = {
        "name": net.name,
        "n_cells": net.n_cells,
        "labels": list(net.labels),
        "kink": net.kink,
        "bias": net.bias,
        "outputs": list(net.outputs),
        "classical_ground_polarizations": ground.polarizations,
        "classical_ground_energy": ground.energy,
        "classical_ground_degeneracy": ground.degeneracy_count,
    }
    if args.format == "json" or args.out != "-":
        reporting.write_json(None if args.out == "-" else args.out, payload)
    else:
        reporting.write_json(None, payload)
    return 0


def cmd_spectrum(args) -> int:
    net = build_device(args.device)
    sched, _ = _schedule(args, auto_off=True)
    slices = spectrum_sweep(net, sched, grid=args.grid, m=args.levels)
    fit = fit_min_gap(slices)
    header = ["s"] + [f"E{k}" for k in range(len(slices[0].eigenvalues))]
    rows = [[sl.s, *sl.eigenvalues] for sl in slices]
    payload = {"device": net.name, "schedule": sched.kind,
               "min_gap": fit.delta0, "gap_width": fit.width,
               "gap_position": fit.s0, "boundary_minimum": fit.boundary,
               "columns": header, "rows": [[float(v) for v in r] for r in rows]}
    reporting.table_or_json(args.out, args.format, header, rows, payload)
    _maybe_plot(args, reporting.plot_spectrum, slices, title=net.name)
    print(f"min gap {fit.delta0:.6g} at s={fit.s0:.4f} width {fit.width:.6g}",
          file=sys.stderr)
    return 0


def cmd_evolve(args) -> int:
    net = build_device(args.device)
    sched, auto = _schedule(args)
    if auto:
        sched = sched.with_smoothing(args.runrate)
    diss = _dissipation(args)
    if args.engine == "icha":
        res = evolve_icha(net, sched, args.runrate, diss)
        header = ["s"] + [f"lambda_{c}_{i}" for i in range(net.n_cells)
                          for c in "xyz"]
        rows = [[s, *res.trajectory[k].ravel()] for k, s in enumerate(res.s)]
        payload = {"device": net.name, "engine": "icha",
                   "runrate": args.runrate, "q_logical": res.q_logical,
                   "oscillation_frequency": oscillation_frequency(res),
                   "columns": header,
                   "rows": [[float(v) for v in r] for r in rows]}
        reporting.table_or_json(args.out, args.format, header, rows, payload)
        _maybe_plot(args, reporting.plot_icha_evolution, res, title=net.name)
        print(f"q_logical {res.q_logical:.6f}", file=sys.stderr)
        return 0
    res = evolve(net, sched, args.runrate, diss)
    header = ["s", "q_adiabatic"] + [f"P_out{k}" for k in range(len(net.outputs))]
    rows = [[s, res.q_adiabatic[k], *res.output_polarizations[k]]
            for k, s in enumerate(res.s)]
    payload = {"device": net.name, "engine": "dense", "runrate": args.runrate,
               "q_adiabatic": res.q_adiabatic_final,
               "q_classical": res.q_classical, "q_logical": res.q_logical,
               "columns": header,
               "rows": [[float(v) for v in r] for r in rows]}
    reporting.table_or_json(args.out, args.format, header, rows, payload)
    _maybe_plot(args, reporting.plot_evolution, res, title=net.name)
    print(f"q_adiabatic {res.q_adiabatic_final:.6f} "
          f"q_classical {res.q_classical:.6f} q_logical {res.q_logical:.6f}",
          file=sys.stderr)
    return 0


def cmd_analyze(args) -> int:
    net = build_device(args.device)
    f0, f1 = analysis.quality_params(net)
    q0, q1 = analysis.quality_factors(net, args.alpha0, args.alpha1)
    census = analysis.incorrect_excited_census(net)
    payload = {
        "device": net.name,
        "F0": f0, "F1": f1, "Q0": q0, "Q1": q1,
        "alpha1_bound": analysis.alpha1_bound(net),
        "incorrect_excitation_gap": census.gap,
        "incorrect_excitation_degeneracy": census.degeneracy,
        "beta_star_estimate": analysis.beta_star_estimate(net),
        "beta_star_thermal": analysis.beta_star_thermal(net, alpha1=args.alpha1),
        "beta_star_mean_field": analysis.beta_star_mean_field(net, alpha1=args.alpha1),
    }
    if args.format == "csv":
        reporting.write_table(None if args.out == "-" else args.out,
                              ["quantity", "value"],
                              [[k, v] for k, v in payload.items()])
    else:
        reporting.write_json(None if args.out == "-" else args.out, payload)
    return 0


def cmd_sweep_freq(args) -> int:
    net = build_device(args.device)
    sched, _ = _schedule(args)
    diss = _dissipation(args)
    rates = np.geomspace(args.rate_min, args.rate_max, args.points)
    metrics = ("logical",) if args.engine == "icha" \
        else ("adiabatic", "classical", "logical")
    sw = frequency_sweep(net, sched, rates, diss, engine=args.engine,
                         metrics=metrics, threshold=args.threshold,
                         workers=args.threads)
    header = ["runrate"] + [f"q_{m}" for m in metrics]
    rows = [[g, *(sw.metrics[m][k] for m in metrics)]
            for k, g in enumerate(sw.runrates)]
    payload = {"device": net.name, "schedule": sched.kind,
               "threshold": sw.threshold,
               "max_rates": {m: sw.max_rates[m] for m in metrics},
               "columns": header,
               "rows": [[float(v) for v in r] for r in rows]}
    reporting.table_or_json(args.out, args.format, header, rows, payload)
    _maybe_plot(args, reporting.plot_frequency_sweep, sw, title=net.name)
    for m in metrics:
        print(f"max rate ({m}): {sw.max_rates[m]:.6g}", file=sys.stderr)
    return 0


def cmd_map2d(args) -> int:
    net = build_device(args.device)
    sched, _ = _schedule(args)
    diss = _dissipation(args)
    xs = np.geomspace(args.x_lo, args.x_hi, args.x_points)
    ys = np.geomspace(args.y_lo, args.y_hi, args.y_points)
    m = map_2d(net, sched, args.x, xs, args.y, ys, metric=args.metric,
               dissipation=diss, engine=args.engine, runrate=args.runrate,
               workers=args.threads)
    header = [args.x, args.y, f"q_{args.metric}"]
    rows = [[m.x[i], m.y[j], m.values[j, i]]
            for j in range(m.y.size) for i in range(m.x.size)]
    payload = {"device": net.name, "x": m.x, "y": m.y, "values": m.values,
               "x_name": m.x_name, "y_name": m.y_name, "metric": m.metric}
    reporting.table_or_json(args.out, args.format, header, rows, payload)
    _maybe_plot(args, reporting.plot_map2d, m, title=net.name)
    return 0


def cmd_contour(args) -> int:
    net = build_device(args.device)
    sched, _ = _schedule(args)
    diss = _dissipation(args)
    xs = np.geomspace(args.x_lo, args.x_hi, args.x_points)
    track = contour_track(net, sched, args.x, xs, args.y,
                          (args.y_lo, args.y_hi), metric=args.metric,
                          dissipation=diss, engine=args.engine,
                          runrate=args.runrate, threshold=args.threshold)
    header = [args.x, f"{args.y}_crossing"]
    rows = list(zip(track.x, track.y_crossing))
    payload = {"device": net.name, "x": track.x,
               "y_crossing": track.y_crossing, "metric": track.metric,
               "threshold": track.threshold}
    reporting.table_or_json(args.out, args.format, header, rows, payload)
    _maybe_plot(args, reporting.plot_contour, track, title=net.name)
    return 0


def cmd_wire_scaling(args) -> int:
    sched, _ = _schedule(args)
    ws = wire_scaling_run(args.lengths, sched, metric=args.metric,
                          threshold=args.threshold, workers=args.threads)
    header = ["length", "max_rate"]
    rows = list(zip(ws.lengths, ws.max_rates))
    payload = {"schedule": ws.kind, "lengths": ws.lengths,
               "max_rates": ws.max_rates, "nu": ws.nu,
               "nu_2sigma": ws.nu_2sigma, "nu1_analytic": ws.nu1}
    reporting.table_or_json(args.out, args.format, header, rows, payload)
    _maybe_plot(args, reporting.plot_wire_scaling, ws)
    print(f"nu = {ws.nu:.4f} +/- {ws.nu_2sigma:.4f} (2 sigma); "
          f"single-channel estimate {ws.nu1:.4f}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qcaclock",
        description="Adiabatic tunnel-barrier clocking simulator for "
                    "two-state QCA networks")
    ap.add_argument("--config", help="JSON file with argument defaults")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("device", help="describe a library device")
    _add_common(p)
    p.set_defaults(func=cmd_device)

    p = sub.add_parser("spectrum", help="instantaneous spectrum along the clock")
    _add_common(p)
    p.add_argument("--grid", type=int, default=401)
    p.add_argument("--levels", type=int, default=10)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("evolve", help="single clocked run")
    _add_common(p)
    _add_dissipation(p)
    p.add_argument("--runrate", type=float, required=True)
    p.add_argument("--engine", choices=("dense", "icha"), default="dense")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("analyze", help="analytic quality parameters")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep-freq", help="metrics versus switching rate")
    _add_common(p)
    _add_dissipation(p)
    p.add_argument("--engine", choices=("dense", "icha"), default="dense")
    p.add_argument("--rate-min", type=float, default=2e-3)
    p.add_argument("--rate-max", type=float, default=0.3)
    p.add_argument("--points", type=int, default=25)
    p.add_argument("--threshold", type=float, default=0.99)
    p.add_argument("--threads", type=int, default=default_workers())
    p.set_defaults(func=cmd_sweep_freq)

    p = sub.add_parser("map2d", help="metric over two parameter axes")
    _add_common(p)
    _add_dissipation(p)
    p.add_argument("--engine", choices=("dense", "icha"), default="dense")
    p.add_argument("--runrate", type=float, default=1e-2)
    p.add_argument("--metric", default="logical",
                   choices=("adiabatic", "classical", "logical"))
    p.add_argument("--x", required=True, choices=("runrate", "delta", "beta"))
    p.add_argument("--y", required=True, choices=("runrate", "delta", "beta"))
    p.add_argument("--x-lo", type=float, required=True)
    p.add_argument("--x-hi", type=float, required=True)
    p.add_argument("--x-points", type=int, default=11)
    p.add_argument("--y-lo", type=float, required=True)
    p.add_argument("--y-hi", type=float, required=True)
    p.add_argument("--y-points", type=int, default=11)
    p.add_argument("--threads", type=int, default=default_workers())
    p.set_defaults(func=cmd_map2d)

    p = sub.add_parser("contour", help="trace a quality threshold contour")
    _add_common(p)
    _add_dissipation(p)
    p.add_argument("--engine", choices=("dense", "icha"), default="dense")
    p.add_argument("--runrate", type=float, default=1e-2)
    p.add_argument("--metric", default="logical",
                   choices=("adiabatic", "classical", "logical"))
    p.add_argument("--x", required=True, choices=("runrate", "delta", "beta"))
    p.add_argument("--y", required=True, choices=("runrate", "delta", "beta"))
    p.add_argument("--x-lo", type=float, required=True)
    p.add_argument("--x-hi", type=float, required=True)
    p.add_argument("--x-points", type=int, default=11)
    p.add_argument("--y-lo", type=float, required=True)
    p.add_argument("--y-hi", type=float, required=True)
    p.add_argument("--threshold", type=float, default=0.99)
    p.set_defaults(func=cmd_contour)

    p = sub.add_parser("wire-scaling",
                       help="maximum switching rate versus wire length")
    _add_common(p, device=False)
    p.add_argument("--lengths", type=int, nargs="+", default=[4, 5, 6, 7, 8])
    p.add_argument("--metric", default="classical",
                   choices=("adiabatic", "classical", "logical"))
    p.add_argument("--threshold", type=float, default=0.99)
    p.add_argument("--threads", type=int, default=default_workers())
    p.set_defaults(func=cmd_wire_scaling)

    return ap


def _config_tokens(path: str) -> list[str]:
    with open(path) as fh:
        defaults = json.load(fh)
    tokens: list[str] = []
    for k, v in defaults.items():
        flag = f"--{k.replace('_', '-')}"
        if isinstance(v, bool):
            if v:
                tokens.append(flag)
        elif isinstance(v, (list, tuple)):
            tokens.append(flag)
            tokens.extend(str(x) for x in v)
        else:
            tokens.extend([flag, str(v)])
    return tokens


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    # Config values are spliced in right after the subcommand so flags given
    # explicitly on the command line take precedence (last one wins).
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if known.config:
        tokens = _config_tokens(known.config)
        for i, t in enumerate(argv):
            if not t.startswith("-") and (i == 0 or argv[i - 1] != "--config"):
                argv = argv[:i + 1] + tokens + argv[i + 1:]
                break
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "device", "n/a") is None:
        ap.error("--device is required (on the command line or in --config)")
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())

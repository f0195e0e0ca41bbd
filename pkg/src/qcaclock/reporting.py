"""Delimited/JSON output and figure rendering for the command line tools."""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

FLOAT_FORMAT = "%.10e"


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return FLOAT_FORMAT % float(v)
    return str(v)


def write_table(out, header: list[str], rows) -> None:
    """CSV table with full-precision floats; ``out`` is a path or '-'."""
    rows = [[_fmt(v) for v in row] for row in rows]
    if out in (None, "-"):
        w = csv.writer(sys.stdout)
        w.writerow(header)
        w.writerows(rows)
        return
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


class _NumpyEncoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (np.floating, np.integer, np.bool_)):
            return o.item()
        return super().default(o)


def write_json(out, payload: dict) -> None:
    text = json.dumps(payload, indent=2, cls=_NumpyEncoder)
    if out in (None, "-"):
        sys.stdout.write(text + "\n")
    else:
        Path(out).write_text(text + "\n")


def table_or_json(out, fmt: str, header: list[str], rows,
                  payload: dict | None = None) -> None:
    if fmt == "csv":
        write_table(out, header, rows)
    elif fmt == "json":
        if payload is None:
            payload = {"columns": header,
                       "rows": [[float(v) if isinstance(v, (float, np.floating))
                                 else v for v in row] for row in rows]}
        write_json(out, payload)
    else:
        raise ValueError(f"unknown format {fmt!r}")


def figure_path(out) -> Path:
    """PNG path next to a delimited output file."""
    if out in (None, "-"):
        return Path("qcaclock_plot.png")
    return Path(out).with_suffix(".png")


def _finish(fig, path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def plot_spectrum(slices, path, title: str = "") -> Path:
    s = np.array([sl.s for sl in slices])
    levels = np.array([sl.eigenvalues for sl in slices])
    fig, ax = plt.subplots(figsize=(5, 4))
    for k in range(levels.shape[1]):
        ax.plot(s, levels[:, k] - levels[:, 0], lw=1)
    ax.set_xlabel("s")
    ax.set_ylabel("energy above ground")
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def plot_evolution(result, path, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(5, 4))
    if np.any(np.isfinite(result.q_adiabatic)):
        ax.plot(result.s, result.q_adiabatic, label="adiabatic quality")
    for k in range(result.output_polarizations.shape[1]):
        ax.plot(result.s, result.output_polarizations[:, k],
                label=f"output {k} polarization")
    ax.set_xlabel("s")
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def plot_icha_evolution(result, path, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(5, 4))
    for i in range(result.trajectory.shape[1]):
        ax.plot(result.s, result.trajectory[:, i, 2], lw=1, label=f"cell {i}")
    ax.set_xlabel("s")
    ax.set_ylabel("z coherence")
    ax.legend(fontsize=7)
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def plot_frequency_sweep(sweep, path, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(5, 4))
    for name, vals in sweep.metrics.items():
        ax.semilogx(sweep.runrates, vals, marker=".", label=name)
    ax.axhline(sweep.threshold, color="k", ls=":", lw=1)
    ax.set_xlabel("switching rate")
    ax.set_ylabel("quality")
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def plot_map2d(m, path, title: str = "", threshold: float | None = 0.99) -> Path:
    fig, ax = plt.subplots(figsize=(5.5, 4))
    pc = ax.pcolormesh(m.x, m.y, m.values, shading="nearest", vmin=0, vmax=1)
    fig.colorbar(pc, ax=ax, label=m.metric)
    if threshold is not None:
        try:
            ax.contour(m.x, m.y, m.values, levels=[threshold], colors="w")
        except ValueError:
            pass
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(m.x_name)
    ax.set_ylabel(m.y_name)
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def plot_contour(track, path, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(track.x, track.y_crossing, marker="o", ms=3)
    ax.set_xlabel(track.x_name)
    ax.set_ylabel(track.y_name)
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def plot_wire_scaling(ws, path, title: str = "") -> Path:
    from .analysis import wire_fmax_model

    fig, ax = plt.subplots(figsize=(5, 4))
    ax.semilogy(ws.lengths, ws.max_rates, "o", label="measured")
    ns = np.arange(ws.lengths.min(), ws.lengths.max() + 1)
    ax.semilogy(ns, [wire_fmax_model(int(n), ws.nu) for n in ns], "--",
                label=f"fit nu={ws.nu:.3f}")
    ax.set_xlabel("wire length")
    ax.set_ylabel("maximum switching rate")
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    return _finish(fig, path)

"""Standard device library: wires, the inverter and majority gates.

Wires are generated parametrically with unit chain kinks.  The inverter and
majority-gate kink graphs are calibrated once against the gate parameters of
the point-charge model and frozen in ``data/devices.json``; the stored
geometry is kept for provenance and for re-deriving the graph with
:func:`qcaclock.network.compute_kink_matrix`.
"""

from __future__ import annotations

import json
import re
from importlib import resources

import numpy as np

from .network import NetworkError, QcaNetwork


def _library() -> dict:
    with resources.files("qcaclock.data").joinpath("devices.json").open() as fh:
        return json.load(fh)


def _from_entry(entry: dict, driver_polarizations, name: str) -> QcaNetwork:
    n = len(entry["cells"])
    kink = np.zeros((n, n))
    for i, j, v in entry["kinks"]:
        kink[i, j] = kink[j, i] = v
    dk = np.zeros((n, len(entry["drivers"])))
    for i, d, v in entry["driver_kinks"]:
        dk[i, d] = v
    dp = np.asarray(driver_polarizations, dtype=float)
    return QcaNetwork(
        kink=kink,
        bias=dk @ dp,
        outputs=tuple(entry["outputs"]),
        driver_kinks=dk,
        driver_polarizations=dp,
        labels=tuple(entry["labels"]),
        name=name,
    )


def wire(n: int, driver_polarization: float = 1.0) -> QcaNetwork:
    """Left-driven wire of ``n`` cells with unit chain kinks."""
    if n < 1:
        raise NetworkError("wire length must be >= 1")
    kink = np.zeros((n, n))
    for i in range(n - 1):
        kink[i, i + 1] = kink[i + 1, i] = 1.0
    dk = np.zeros((n, 1))
    dk[0, 0] = 1.0
    dp = np.array([driver_polarization])
    return QcaNetwork(
        kink=kink, bias=dk @ dp, outputs=(n - 1,),
        driver_kinks=dk, driver_polarizations=dp,
        labels=tuple(f"w{i + 1}" for i in range(n)), name=f"Wire-{n}",
    )


def inverter() -> QcaNetwork:
    return _from_entry(_library()["inverter"], [1.0], "Inverter")


def majority(a: int, b: int, c: int) -> QcaNetwork:
    """Majority gate with logical inputs A (top arm), B (in-line arm), C
    (bottom arm)."""
    pol = [1.0 if x else -1.0 for x in (a, b, c)]
    return _from_entry(_library()["majority"], pol, f"Maj-{a}{b}{c}")


def network_from_file(path) -> QcaNetwork:
    """Custom network from a device JSON file (same schema as the library)."""
    with open(path) as fh:
        entry = json.load(fh)
    pol = [d.get("polarization", 1.0) for d in entry["drivers"]]
    try:
        return _from_entry(entry, pol, entry.get("name", "custom"))
    except (KeyError, IndexError, TypeError) as exc:
        raise NetworkError(f"malformed device file {path}: {exc}") from exc


def build_device(spec: str) -> QcaNetwork:
    """Build a library device from its name.

    Recognized names: ``Wire-N``, ``Inverter``, ``Maj-ABC`` with binary
    inputs, or a path to a device JSON file (anything containing a slash or
    ending in ``.json``).
    """
    name = spec.strip()
    m = re.fullmatch(r"[Ww]ire-(\d+)", name)
    if m:
        return wire(int(m.group(1)))
    if name.lower() in ("inverter", "inv"):
        return inverter()
    m = re.fullmatch(r"[Mm]aj-([01])([01])([01])", name)
    if m:
        return majority(*(int(g) for g in m.groups()))
    if "/" in name or name.endswith(".json"):
        return network_from_file(name)
    raise NetworkError(f"unknown device {spec!r}")


#: Device names used throughout the performance studies.
LIBRARY_DEVICES = ("Wire-5", "Wire-3", "Inverter", "Maj-111", "Maj-101", "Maj-110")

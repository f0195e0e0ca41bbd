"""Cell geometry, kink-energy computation and classical ground states.

A network is a set of polarizable cells coupled by electrostatic kink
energies, driven by fixed-polarization driver cells that enter only through
the bias vector.  All energies are expressed in units of the nearest
neighbour kink energy, so the strongest in-line coupling is exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

#: Half-offset of the corner dots relative to the cell pitch.  Calibrated so
#: the diagonally adjacent kink energy equals -0.223 of the in-line value,
#: which reproduces the library gate parameters.
DOT_OFFSET = 0.24954187019466967

#: Interactions weaker than this fraction of the nearest-neighbour kink are
#: dropped by default.
DEFAULT_CUTOFF = 0.15


class NetworkError(ValueError):
    """Raised for malformed networks or device specifications."""


@dataclass(frozen=True)
class CellGeometry:
    """Square four-dot cell at a given position.

    ``dot_offsets`` are the four corner dot positions relative to ``center``.
    Driver cells carry a fixed polarization in [-1, 1].
    """

    center: tuple[float, float]
    dot_offsets: tuple[tuple[float, float], ...]
    kind: str = "normal"
    driver_polarization: float | None = None

    def __post_init__(self):
        if self.kind not in ("normal", "driver"):
            raise NetworkError(f"unknown cell kind {self.kind!r}")
        if len(self.dot_offsets) != 4:
            raise NetworkError("a cell has exactly four dots")
        d = np.asarray(self.dot_offsets, dtype=float)
        # The four dots must form a square: equal side pairs, equal diagonals.
        dists = sorted(np.linalg.norm(d[i] - d[j]) for i, j in combinations(range(4), 2))
        side, diag = dists[0], dists[-1]
        if side <= 0 or abs(diag - np.sqrt(2.0) * side) > 1e-9 * side:
            raise NetworkError("dot offsets do not form a square")
        if (self.kind == "driver") != (self.driver_polarization is not None):
            raise NetworkError("driver_polarization present iff kind == 'driver'")
        if self.kind == "driver" and not -1.0 <= self.driver_polarization <= 1.0:
            raise NetworkError("driver polarization must lie in [-1, 1]")

    def dot_positions(self) -> np.ndarray:
        return np.asarray(self.center, dtype=float) + np.asarray(self.dot_offsets, dtype=float)


def standard_cell(center, pitch: float = 1.0, kind: str = "normal",
                  driver_polarization: float | None = None) -> CellGeometry:
    """Cell with corner dots at the calibrated offsets for a given pitch."""
    b = DOT_OFFSET * pitch
    offsets = ((b, b), (-b, -b), (b, -b), (-b, b))
    return CellGeometry(tuple(center), offsets, kind, driver_polarization)


def _dot_charges(cell: CellGeometry, polarization: float) -> np.ndarray:
    # Occupation charge minus the e/2 neutralizing background per dot.  The
    # first two offsets are one diagonal, the last two the other.
    occ = 0.5 * polarization
    return np.array([0.5 + occ - 0.5, 0.5 + occ - 0.5, 0.5 - occ - 0.5, 0.5 - occ - 0.5])


def _pair_energy(a: CellGeometry, pa: float, b: CellGeometry, pb: float) -> float:
    ra, rb = a.dot_positions(), b.dot_positions()
    qa, qb = _dot_charges(a, pa), _dot_charges(b, pb)
    diff = ra[:, None, :] - rb[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    if np.any(dist < 1e-12):
        raise NetworkError("coincident dot positions between cells")
    return float(np.sum(qa[:, None] * qb[None, :] / dist))


def kink_energy(a: CellGeometry, b: CellGeometry) -> float:
    """Unnormalized kink energy: U(anti-aligned) - U(aligned)."""
    return _pair_energy(a, 1.0, b, -1.0) - _pair_energy(a, 1.0, b, 1.0)


def compute_kink_matrix(cells: list[CellGeometry], cutoff: float = DEFAULT_CUTOFF) -> np.ndarray:
    """Kink matrix of the point-charge quadrupole model.

    Normalized so the strongest (nearest-neighbour in-line) interaction is
    +1; entries with magnitude below ``cutoff`` are zeroed.
    """
    if len(cells) < 2:
        raise NetworkError("need at least two cells")
    if cutoff < 0:
        raise NetworkError("cutoff must be nonnegative")
    n = len(cells)
    ek = np.zeros((n, n))
    for i, j in combinations(range(n), 2):
        ek[i, j] = ek[j, i] = kink_energy(cells[i], cells[j])
    scale = np.max(np.abs(ek))
    if scale == 0:
        raise NetworkError("all kink energies vanish")
    ek /= scale
    ek[np.abs(ek) < cutoff] = 0.0
    return ek


@dataclass(frozen=True)
class QcaNetwork:
    """Problem instance: N normal cells with kinks, biases and outputs.

    ``kink`` and ``bias`` are in units of the nearest-neighbour kink energy.
    ``driver_kinks`` (N x D) and ``driver_polarizations`` (D) record the
    declared drivers; the bias must equal their product.
    """

    kink: np.ndarray
    bias: np.ndarray
    outputs: tuple[int, ...]
    driver_kinks: np.ndarray
    driver_polarizations: np.ndarray
    labels: tuple[str, ...] = ()
    name: str = "custom"

    def __post_init__(self):
        kink = np.asarray(self.kink, dtype=float)
        bias = np.asarray(self.bias, dtype=float)
        dk = np.atleast_2d(np.asarray(self.driver_kinks, dtype=float))
        dp = np.atleast_1d(np.asarray(self.driver_polarizations, dtype=float))
        n = bias.size
        if kink.shape != (n, n):
            raise NetworkError("kink matrix shape does not match bias length")
        if not np.allclose(kink, kink.T, atol=1e-12):
            raise NetworkError("kink matrix must be symmetric")
        if np.any(np.abs(np.diag(kink)) > 0):
            raise NetworkError("kink matrix must have zero diagonal")
        nz = np.abs(kink[kink != 0])
        if nz.size and abs(nz.max() - 1.0) > 1e-12:
            raise NetworkError("nearest-neighbour kink must be normalized to 1")
        if dk.size and dk.shape[0] != n:
            raise NetworkError("driver_kinks shape does not match cell count")
        if dk.size:
            implied = dk @ dp
        else:
            implied = np.zeros(n)
        if not np.allclose(bias, implied, atol=1e-9):
            raise NetworkError("bias does not match declared driver contributions")
        if not self.outputs:
            raise NetworkError("output set must be nonempty")
        if any(not 0 <= i < n for i in self.outputs):
            raise NetworkError("output index out of range")
        object.__setattr__(self, "kink", kink)
        object.__setattr__(self, "bias", bias)
        object.__setattr__(self, "driver_kinks", dk)
        object.__setattr__(self, "driver_polarizations", dp)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"c{i}" for i in range(n)))

    @property
    def n_cells(self) -> int:
        return self.bias.size


@dataclass(frozen=True)
class ClassicalGround:
    """Exact minimizer of the classical (diagonal) part of the Hamiltonian."""

    polarizations: np.ndarray
    energy: float
    degenerate: bool
    degeneracy_count: int = 1


def classical_energies(net: QcaNetwork) -> np.ndarray:
    """Energies of all 2^N classical configurations, index-ordered.

    Configuration ``idx`` has sigma_z(i) = +1 when bit (N-1-i) of ``idx`` is
    0, matching the computational-basis ordering of the dense Hamiltonian.
    """
    n = net.n_cells
    if n > 20:
        raise NetworkError("brute-force enumeration limited to N <= 20")
    idx = np.arange(2 ** n, dtype=np.int64)
    sigma = np.empty((2 ** n, n))
    for i in range(n):
        bit = (idx >> (n - 1 - i)) & 1
        sigma[:, i] = 1.0 - 2.0 * bit
    return 0.5 * sigma @ net.bias - 0.25 * np.einsum("ci,ij,cj->c", sigma, net.kink, sigma)


def _sigma_of_index(idx: int, n: int) -> np.ndarray:
    return np.array([1.0 - 2.0 * ((idx >> (n - 1 - i)) & 1) for i in range(n)])


def classical_ground(net: QcaNetwork) -> ClassicalGround:
    """Brute-force ground state of the classical Hamiltonian."""
    energies = classical_energies(net)
    order = np.argsort(energies, kind="stable")
    e0 = energies[order[0]]
    spread = max(1.0, float(energies[order[-1]] - e0))
    tol = 1e-9 * spread
    count = int(np.sum(energies <= e0 + tol))
    sigma = _sigma_of_index(int(order[0]), net.n_cells)
    return ClassicalGround(sigma, float(e0), count > 1, count)


def effective_bias(net: QcaNetwork, ground: ClassicalGround) -> np.ndarray:
    """Per-cell bias seen in the classical ground state."""
    if ground.degenerate:
        raise NetworkError("effective bias undefined for degenerate ground state")
    return net.bias - net.kink @ ground.polarizations

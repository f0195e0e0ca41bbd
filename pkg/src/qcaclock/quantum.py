"""Dense Hamiltonians, eigensystems, projectors and spectrum sweeps.

Everything is real symmetric in the computational basis; cell i maps to
qubit i with sigma_z = diag(1, -1), so basis index bit (N-1-i) = 0 means
sigma_z(i) = +1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import curve_fit

from .network import ClassicalGround, QcaNetwork, classical_energies
from .schedule import Schedule

MAX_DENSE_CELLS = 12
DEGENERACY_RTOL = 1e-9

_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])


class QuantumError(RuntimeError):
    pass


def pauli(n: int, i: int, which: str) -> np.ndarray:
    """Single-cell Pauli operator embedded in the 2^n space."""
    op = {"x": _SX, "z": _SZ}[which]
    m = np.array([[1.0]])
    for k in range(n):
        m = np.kron(m, op if k == i else np.eye(2))
    return m


@dataclass
class HamiltonianTerms:
    """Cached operator pieces of a network: H = -(A/2) hx + (B/2) hz."""

    hx: np.ndarray
    hz: np.ndarray
    sz: list[np.ndarray]
    sx: list[np.ndarray]

    @classmethod
    def of(cls, net: QcaNetwork) -> "HamiltonianTerms":
        n = net.n_cells
        if n > MAX_DENSE_CELLS:
            raise QuantumError(f"dense operators limited to N <= {MAX_DENSE_CELLS}")
        sx = [pauli(n, i, "x") for i in range(n)]
        sz = [pauli(n, i, "z") for i in range(n)]
        hx = sum(sx)
        hz = sum(net.bias[i] * sz[i] for i in range(n))
        for i, j in combinations(range(n), 2):
            if net.kink[i, j]:
                hz = hz - net.kink[i, j] * (sz[i] @ sz[j])
        return cls(hx=hx, hz=np.asarray(hz), sz=sz, sx=sx)

    def at(self, a: float, b: float) -> np.ndarray:
        return -0.5 * a * self.hx + 0.5 * b * self.hz


def build_hamiltonian(net: QcaNetwork, a: float, b: float) -> np.ndarray:
    """Dense transverse-Ising Hamiltonian of the network at (A, B)."""
    return HamiltonianTerms.of(net).at(a, b)


def eigensystem(op: np.ndarray, m: int | None = None):
    """Lowest ``m`` eigenpairs (ascending) of a real-symmetric/Hermitian
    operator; the full decomposition when ``m`` is None."""
    dim = op.shape[0]
    if m is None:
        m = dim
    if not 1 <= m <= dim:
        raise QuantumError("requested level count out of range")
    herm = 0.5 * (op + op.conj().T)
    vals, vecs = np.linalg.eigh(herm)
    scale = max(np.max(np.abs(vals)), 1.0)
    resid = np.linalg.norm(herm @ vecs[:, :m] - vecs[:, :m] * vals[:m])
    if resid > 1e-10 * scale * np.sqrt(m):
        raise QuantumError(f"eigensolver residual {resid:.2e} too large")
    return vals[:m], vecs[:, :m]


def degenerate_ground_projector(vals: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    """Projector onto the (possibly degenerate) lowest eigenspace."""
    spread = max(float(vals[-1] - vals[0]), 1.0)
    sel = vals <= vals[0] + DEGENERACY_RTOL * spread
    v = vecs[:, sel]
    return v @ v.conj().T


def ground_projector(op: np.ndarray) -> np.ndarray:
    vals, vecs = eigensystem(op)
    return degenerate_ground_projector(vals, vecs)


def classical_projector(net: QcaNetwork) -> np.ndarray:
    """Projector onto the (possibly degenerate) classical ground space."""
    energies = classical_energies(net)
    e0 = energies.min()
    spread = max(float(energies.max() - e0), 1.0)
    diag = (energies <= e0 + DEGENERACY_RTOL * spread).astype(float)
    return np.diag(diag)


def transverse_projector(n: int) -> np.ndarray:
    """Rank-1 projector onto the uniform superposition (ground of -H_X)."""
    v = np.full(2 ** n, 2.0 ** (-n / 2.0))
    return np.outer(v, v)


def projector(net: QcaNetwork, which: str, a: float = 1.0, b: float = 1.0) -> np.ndarray:
    if which == "ground":
        return ground_projector(build_hamiltonian(net, a, b))
    if which == "classical":
        return classical_projector(net)
    if which == "transverse":
        return transverse_projector(net.n_cells)
    raise QuantumError(f"unknown projector {which!r}")


@dataclass(frozen=True)
class SpectrumSlice:
    s: float
    eigenvalues: np.ndarray
    gap: float
    ground_degeneracy: int


@dataclass(frozen=True)
class GapFit:
    """Hyperbolic fit Delta(s) = delta0 sqrt(1 + (s - s0)^2 / width^2).

    ``width`` is NaN (and ``boundary`` True) when the minimum gap sits on the
    domain boundary and no fit is attempted.
    """

    delta0: float
    width: float
    s0: float
    delta0_uncertainty: float
    width_uncertainty: float
    boundary: bool = False


def spectrum_sweep(net: QcaNetwork, sched: Schedule, grid: int = 401,
                   m: int = 10) -> list[SpectrumSlice]:
    """Lowest-m spectrum on a uniform s grid."""
    if grid < 3:
        raise QuantumError("grid must have at least 3 points")
    terms = HamiltonianTerms.of(net)
    m = min(m, 2 ** net.n_cells)
    slices = []
    for s in np.linspace(0.0, 1.0, grid):
        a, b = sched.evaluate(s)
        vals = np.linalg.eigvalsh(terms.at(a, b))
        spread = max(float(vals[-1] - vals[0]), 1.0)
        deg = int(np.sum(vals <= vals[0] + DEGENERACY_RTOL * spread))
        slices.append(SpectrumSlice(float(s), vals[:m], float(vals[1] - vals[0]), deg))
    return slices


def min_gap_index(slices: list[SpectrumSlice]) -> int:
    return int(np.argmin([sl.gap for sl in slices]))


def _hyperbola(s, d0, w, s0):
    return d0 * np.sqrt(1.0 + (s - s0) ** 2 / w ** 2)


def fit_min_gap(slices: list[SpectrumSlice], window: float = 0.07) -> GapFit:
    """Hyperbola fit of the gap within ``window`` of the grid minimum.

    When the minimum sits on the boundary of [0, 1] (majority-gate case) the
    fit is skipped and the boundary gap is reported with undefined width.
    """
    i0 = min_gap_index(slices)
    s = np.array([sl.s for sl in slices])
    gap = np.array([sl.gap for sl in slices])
    if i0 in (0, len(slices) - 1):
        return GapFit(float(gap[i0]), float("nan"), float(s[i0]),
                      0.0, float("nan"), boundary=True)
    mask = np.abs(s - s[i0]) <= window
    if mask.sum() < 8:
        raise QuantumError("too few grid points inside the fit window")
    popt, pcov = curve_fit(_hyperbola, s[mask], gap[mask],
                           p0=[gap[i0], window, s[i0]], maxfev=10000)
    d0, w, s0 = popt
    err = 2.0 * np.sqrt(np.maximum(np.diag(pcov), 0.0))
    return GapFit(float(abs(d0)), float(abs(w)), float(s0),
                  float(err[0]), float(err[1]))


def expectations(psi_or_rho: np.ndarray, ops: list[np.ndarray]) -> np.ndarray:
    """Expectation values for a state vector or density operator."""
    if psi_or_rho.ndim == 1:
        psi = psi_or_rho
        return np.array([np.real(psi.conj() @ (op @ psi)) for op in ops])
    rho = psi_or_rho
    return np.array([np.real(np.trace(rho @ op)) for op in ops])


def ground_index(ground: ClassicalGround) -> int:
    """Basis index of a non-degenerate classical ground configuration."""
    n = ground.polarizations.size
    idx = 0
    for i, p in enumerate(ground.polarizations):
        if p < 0:
            idx |= 1 << (n - 1 - i)
    return idx

"""Analytic performance estimates: quality parameters, Landau-Zener limits,
wire scaling laws and relaxation temperature thresholds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .icha import mean_field_logical_quality
from .network import NetworkError, QcaNetwork, classical_energies, classical_ground, effective_bias
from .quantum import build_hamiltonian
from .schedule import Schedule

THRESHOLD = 0.99


# ---------------------------------------------------------------------------
# Quality parameters of the fixed network


def quality_params(net: QcaNetwork) -> tuple[float, float]:
    """(F0, F1): sensitivity of the start and end of the clock to the finite
    tunneling ratio.

    F0 sums the squared biases and pair couplings seen at full tunneling;
    F1 sums the inverse-square effective biases in the classical ground
    state, which control the residual output depolarization.
    """
    f0 = 0.25 * float(net.bias @ net.bias)
    iu = np.triu_indices(net.n_cells, k=1)
    f0 += (1.0 / 16.0) * float(np.sum(net.kink[iu] ** 2))
    ht = effective_bias(net, classical_ground(net))
    if np.any(ht == 0.0):
        raise NetworkError("zero effective bias; F1 diverges")
    f1 = 0.25 * float(np.sum(1.0 / ht ** 2))
    return f0, f1


def quality_factors(net: QcaNetwork, alpha0: float, alpha1: float) -> tuple[float, float]:
    """(Q0, Q1): upper bounds on the start and end run quality."""
    f0, f1 = quality_params(net)
    return 1.0 - f0 / alpha0 ** 2, 1.0 - f1 * alpha1 ** 2


def wire_quality_param(n: int) -> float:
    """Closed-form F0 = F1 = (N + 3) / 16 for an N-cell driven wire."""
    return (n + 3) / 16.0


def alpha1_bound(net: QcaNetwork, threshold: float = THRESHOLD) -> float:
    """Largest final tunneling ratio compatible with Q1 >= threshold."""
    _, f1 = quality_params(net)
    return float(np.sqrt((1.0 - threshold) / f1))


# ---------------------------------------------------------------------------
# Landau-Zener model


def lz_probability(delta0: float, width: float, runrate: float) -> float:
    """Diabatic excitation probability for a hyperbolic gap Delta_0, W."""
    return float(np.exp(-np.pi * delta0 * width / (2.0 * runrate)))


def lz_max_rate(delta0: float, width: float, threshold: float = THRESHOLD) -> float:
    """Largest runrate keeping the excitation below 1 - threshold."""
    return float(np.pi * delta0 * width / (-2.0 * np.log(1.0 - threshold)))


# ---------------------------------------------------------------------------
# Free-fermion wire spectrum


def wire_excitations(n: int, a: float, b: float) -> np.ndarray:
    """Single-particle excitation energies of an unbiased N-cell wire,
    eps_k = sqrt(B^2 sin^2 q_k + (A - B cos q_k)^2), q_k = k pi / (N + 1)."""
    q = np.arange(1, n + 1) * np.pi / (n + 1)
    return np.sqrt((b * np.sin(q)) ** 2 + (a - b * np.cos(q)) ** 2)


@dataclass(frozen=True)
class WireGapParams:
    delta0: float
    width: float
    s_min: float


def wire_lz_params(n: int, sched: Schedule, k: int = 1) -> WireGapParams:
    """Minimum of the k-th wire excitation along the schedule and the local
    hyperbola width from the curvature of the squared gap."""
    q = k * np.pi / (n + 1)

    def gap(s: float) -> float:
        a, b = sched.evaluate(s)
        return float(np.sqrt((b * np.sin(q)) ** 2 + (a - b * np.cos(q)) ** 2))

    res = minimize_scalar(gap, bounds=(0.0, 1.0), method="bounded",
                          options={"xatol": 1e-12})
    s0, d0 = float(res.x), float(res.fun)
    eps = 1e-4
    lo, hi = max(s0 - eps, 0.0), min(s0 + eps, 1.0)
    mid = 0.5 * (lo + hi)
    curv = (gap(hi) ** 2 - 2.0 * gap(mid) ** 2 + gap(lo) ** 2) / (0.5 * (hi - lo)) ** 2
    if curv <= 0:
        raise ValueError("gap minimum has no positive curvature")
    width = d0 / np.sqrt(0.5 * curv)
    return WireGapParams(d0, float(width), s0)


def nu1_analytic(kind: str, alpha0: float = 5.0, alpha1: float = 0.05) -> float:
    """Single-channel wire scaling constant nu_1 = (N+1)^2 Delta_0 W |_{k=1}
    in the large-N limit, in closed form per schedule."""
    a0, a1 = alpha0, alpha1
    if kind == "linear":
        return float(np.pi ** 2 * (1.0 - a1 / a0) ** 2
                     / (2.0 - (a1 + 1.0 / a0)) ** 3)
    if kind == "quasi":
        k = 1.0 + (1.0 - a1) / (1.0 - 1.0 / a0)
        return float(np.pi ** 2 * (k + (a0 - 1.0)) / (k ** 2 * (a0 - 1.0)))
    if kind == "sinus":
        return float(4.0 * np.pi / np.sqrt((a0 - a1) ** 2
                                           + 4.0 * (a0 - 1.0) * (1.0 - a1)))
    raise ValueError(f"unknown schedule kind {kind!r}")


def wire_fmax_model(n: int, nu: float, alpha1: float = 0.05,
                    threshold: float = THRESHOLD) -> float:
    """Predicted maximum switching rate of an N-cell wire for the given
    scaling constant nu."""
    q1 = 1.0 - alpha1 ** 2 * wire_quality_param(n)
    return float(-np.pi * nu
                 / (2.0 * np.log(1.0 - threshold / q1) * (n + 1) ** 2))


# ---------------------------------------------------------------------------
# Relaxation temperature thresholds


@dataclass(frozen=True)
class ExcitationCensus:
    """Lowest classical excitation with a wrong logical output."""

    gap: float
    degeneracy: int


def incorrect_excited_census(net: QcaNetwork, tol: float = 1e-9) -> ExcitationCensus:
    """Energy and multiplicity of the lowest classical configurations whose
    output disagrees with the classical ground state."""
    energies = classical_energies(net)
    ground = classical_ground(net)
    n = net.n_cells
    targets = ground.polarizations[list(net.outputs)]
    idx = np.arange(energies.size, dtype=np.int64)
    wrong = np.zeros(energies.size, dtype=bool)
    for o, t in zip(net.outputs, targets):
        sigma = 1.0 - 2.0 * ((idx >> (n - 1 - o)) & 1)
        wrong |= sigma != t
    if not np.any(wrong):
        raise NetworkError("every configuration has the correct output")
    e0 = energies.min()
    e1 = energies[wrong].min()
    spread = max(float(energies.max() - e0), 1.0)
    deg = int(np.sum(wrong & (energies <= e1 + tol * spread)))
    return ExcitationCensus(float(e1 - e0), deg)


def beta_star_estimate(net: QcaNetwork, threshold: float = THRESHOLD) -> float:
    """Inverse-temperature threshold from the two-level Boltzmann estimate:
    the wrong-output excitations must carry less than 1 - threshold weight."""
    census = incorrect_excited_census(net)
    return float((np.log(census.degeneracy) - np.log(1.0 - threshold))
                 / census.gap)


def relaxed_logical_quality(net: QcaNetwork, beta: float,
                            alpha1: float = 0.05) -> float:
    """Logical quality of the fully relaxed (thermal) end-of-clock state of
    the quantum Hamiltonian at the residual tunneling ratio."""
    ham = build_hamiltonian(net, alpha1, 1.0)
    vals, vecs = np.linalg.eigh(ham)
    w = np.exp(-beta * (vals - vals[0]))
    w /= w.sum()
    ground = classical_ground(net)
    q = 1.0
    for o in net.outputs:
        n = net.n_cells
        idx = np.arange(2 ** n, dtype=np.int64)
        sz_diag = 1.0 - 2.0 * ((idx >> (n - 1 - o)) & 1)
        val = float(np.einsum("i,ji,j,ji->", w, vecs, sz_diag, vecs))
        q *= 0.5 * (1.0 + val * ground.polarizations[o])
    return q


def beta_star_thermal(net: QcaNetwork, threshold: float = THRESHOLD,
                      alpha1: float = 0.05,
                      bracket: tuple[float, float] = (0.5, 60.0)) -> float:
    """beta at which the relaxed thermal state reaches the quality threshold."""
    f = lambda b: relaxed_logical_quality(net, b, alpha1) - threshold
    return float(brentq(f, *bracket, xtol=1e-10))


def beta_star_mean_field(net: QcaNetwork, threshold: float = THRESHOLD,
                         alpha1: float = 0.05,
                         bracket: tuple[float, float] = (0.5, 60.0)) -> float:
    """beta at which the local mean-field thermal state reaches the quality
    threshold."""
    f = lambda b: mean_field_logical_quality(net, b, a=alpha1) - threshold
    return float(brentq(f, *bracket, xtol=1e-10))


# ---------------------------------------------------------------------------
# Residual coherent oscillations


def precession_frequency(net: QcaNetwork, lam: np.ndarray, a: float, b: float,
                         runrate: float, cell: int) -> float:
    """Larmor frequency (cycles per unit s) of one cell's coherence vector
    about its local field."""
    from .icha import local_fields

    g = np.linalg.norm(local_fields(net, lam, a, b)[cell])
    return float(g / (2.0 * np.pi * runrate))

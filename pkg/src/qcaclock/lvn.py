"""Density-matrix dynamics of a clocked network.

The equation of motion in normalized time s = f t is

    runrate * drho/ds = -i [H(s), rho] - delta (rho - rho_ss(s))

where ``runrate`` is the switching rate in units of the nearest-neighbour
kink frequency and ``delta`` relaxes toward an instantaneous steady state
(thermal, ground-space or classical-ground-space).  The coherent
(delta = 0) case is propagated as a pure state, which is exact there and
much cheaper than the dense density matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .network import QcaNetwork, classical_ground
from .quantum import (
    HamiltonianTerms,
    QuantumError,
    classical_projector,
    degenerate_ground_projector,
)
from .schedule import Schedule

DISSIPATION_KINDS = ("none", "boltzmann", "ground", "classical")

DEFAULT_RTOL = 1e-8
DEFAULT_ATOL = 1e-10
DEFAULT_SAMPLES = 501
THRESHOLD = 0.99


class DynamicsError(RuntimeError):
    pass


@dataclass(frozen=True)
class DissipationSpec:
    """Relaxation channel: ``kind`` selects the steady state, ``rate`` is the
    relaxation rate delta and ``beta`` the inverse temperature (thermal
    steady state only)."""

    kind: str = "none"
    rate: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.kind not in DISSIPATION_KINDS:
            raise DynamicsError(f"unknown dissipation kind {self.kind!r}")
        if self.rate < 0:
            raise DynamicsError("relaxation rate must be nonnegative")
        if self.kind == "none" and self.rate != 0:
            raise DynamicsError("kind 'none' requires zero rate")
        if self.kind != "none" and self.rate == 0:
            raise DynamicsError(f"kind {self.kind!r} requires a positive rate")
        if self.kind == "boltzmann" and self.beta <= 0:
            raise DynamicsError("thermal steady state requires beta > 0")

    @property
    def active(self) -> bool:
        return self.kind != "none" and self.rate > 0


def steady_state(net: QcaNetwork, ham: np.ndarray, spec: DissipationSpec,
                 classical_proj: np.ndarray | None = None) -> np.ndarray:
    """Instantaneous steady state for the given Hamiltonian."""
    if spec.kind == "boltzmann":
        vals, vecs = np.linalg.eigh(0.5 * (ham + ham.conj().T))
        w = np.exp(-spec.beta * (vals - vals[0]))
        w /= w.sum()
        return (vecs * w) @ vecs.conj().T
    if spec.kind == "ground":
        vals, vecs = np.linalg.eigh(0.5 * (ham + ham.conj().T))
        p = degenerate_ground_projector(vals, vecs)
        return p / np.trace(p).real
    if spec.kind == "classical":
        p = classical_proj if classical_proj is not None else classical_projector(net)
        return p / np.trace(p).real
    raise DynamicsError("steady state undefined without dissipation")


def initial_state(net: QcaNetwork, ham0: np.ndarray, spec: DissipationSpec,
                  classical_proj: np.ndarray | None = None) -> np.ndarray:
    """Stationary density matrix of the full equation of motion at s = 0.

    Solves -i [H(0), rho] = delta (rho - rho_ss(0)) in the eigenbasis of
    H(0), where the equation is diagonal in matrix elements:
    rho_ij = delta rho_ss,ij / (delta + i (E_i - E_j)).
    """
    vals, vecs = np.linalg.eigh(0.5 * (ham0 + ham0.conj().T))
    if not spec.active:
        p = degenerate_ground_projector(vals, vecs)
        return p / np.trace(p).real
    ss = steady_state(net, ham0, spec, classical_proj)
    ss_eig = vecs.conj().T @ ss @ vecs
    gaps = vals[:, None] - vals[None, :]
    rho_eig = spec.rate * ss_eig / (spec.rate + 1j * gaps)
    rho = vecs @ rho_eig @ vecs.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    resid = np.linalg.norm(-1j * (ham0 @ rho - rho @ ham0)
                           - spec.rate * (rho - ss))
    if resid > 1e-10 * max(1.0, np.linalg.norm(ham0)):
        raise DynamicsError(f"initial-state residual {resid:.2e} too large")
    return rho


@dataclass
class EvolutionResult:
    """Sampled trajectory of a single clocked run."""

    s: np.ndarray
    q_adiabatic: np.ndarray
    output_polarizations: np.ndarray  # (samples, n_outputs)
    final_state: np.ndarray  # density matrix, or state vector (pure path)
    q_classical: float
    q_logical: float
    runrate: float
    pure: bool

    @property
    def q_adiabatic_final(self) -> float:
        return float(self.q_adiabatic[-1])


def _target_output_polarizations(net: QcaNetwork) -> np.ndarray:
    ground = classical_ground(net)
    return ground.polarizations[list(net.outputs)]


def _logical_quality(output_pols: np.ndarray, targets: np.ndarray) -> float:
    return float(np.prod(0.5 * (1.0 + output_pols * targets)))


def evolve(net: QcaNetwork, sched: Schedule, runrate: float,
           dissipation: DissipationSpec = DissipationSpec(),
           n_samples: int = DEFAULT_SAMPLES,
           rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL,
           track_adiabatic: bool = True) -> EvolutionResult:
    """Propagate one clocked run from s = 0 to 1 and score it.

    ``track_adiabatic`` disables the per-sample ground-space projection when
    only end-of-run metrics are needed (it dominates the cost of the cheap
    pure-state path).
    """
    if runrate <= 0:
        raise DynamicsError("runrate must be positive")
    if n_samples < 2:
        raise DynamicsError("need at least two samples")
    terms = HamiltonianTerms.of(net)
    s_eval = np.linspace(0.0, 1.0, n_samples)
    pure = not dissipation.active
    if pure:
        states = _evolve_pure(terms, sched, runrate, s_eval, rtol, atol)
    else:
        states = _evolve_dense(net, terms, sched, runrate, dissipation,
                               s_eval, rtol, atol)
    return _score(net, terms, sched, runrate, s_eval, states, pure,
                  track_adiabatic)


def _evolve_pure(terms, sched, runrate, s_eval, rtol, atol):
    vals0, vecs0 = np.linalg.eigh(terms.at(*sched.evaluate(0.0)))
    spread = max(float(vals0[-1] - vals0[0]), 1.0)
    if vals0[1] - vals0[0] <= 1e-9 * spread:
        raise DynamicsError("degenerate initial ground state; pure-state "
                            "evolution is ill-defined")
    psi0 = vecs0[:, 0].astype(complex)

    def rhs(s, psi):
        a, b = sched.evaluate(float(s))
        return (-1j / runrate) * (terms.at(a, b) @ psi)

    sol = solve_ivp(rhs, (0.0, 1.0), psi0, method="RK45",
                    t_eval=s_eval, rtol=rtol, atol=atol)
    if not sol.success:
        raise DynamicsError(f"integration failed: {sol.message}")
    psis = sol.y.T
    return [psi / np.linalg.norm(psi) for psi in psis]


def _evolve_dense(net, terms, sched, runrate, dissipation, s_eval, rtol, atol):
    cls_proj = (classical_projector(net)
                if dissipation.kind == "classical" else None)
    rho0 = initial_state(net, terms.at(*sched.evaluate(0.0)), dissipation,
                         cls_proj)
    dim = rho0.shape[0]
    delta = dissipation.rate

    def rhs(s, y):
        rho = y.reshape(dim, dim)
        ham = terms.at(*sched.evaluate(float(s)))
        drho = -1j * (ham @ rho - rho @ ham)
        drho -= delta * (rho - steady_state(net, ham, dissipation, cls_proj))
        return (drho / runrate).ravel()

    sol = solve_ivp(rhs, (0.0, 1.0), rho0.astype(complex).ravel(),
                    method="RK45", t_eval=s_eval, rtol=rtol, atol=atol)
    if not sol.success:
        raise DynamicsError(f"integration failed: {sol.message}")
    out = []
    for col in sol.y.T:
        rho = col.reshape(dim, dim)
        rho = 0.5 * (rho + rho.conj().T)
        rho /= np.trace(rho).real
        out.append(rho)
    return out


def _score(net, terms, sched, runrate, s_eval, states, pure, track_adiabatic):
    targets = _target_output_polarizations(net)
    out_sz = [terms.sz[i] for i in net.outputs]
    qa = np.full(s_eval.size, np.nan)
    pols = np.empty((s_eval.size, len(net.outputs)))
    track_idx = range(s_eval.size) if track_adiabatic else [s_eval.size - 1]
    for k, (s, st) in enumerate(zip(s_eval, states)):
        if pure:
            pols[k] = [np.real(st.conj() @ (op @ st)) for op in out_sz]
        else:
            pols[k] = [np.real(np.trace(st @ op)) for op in out_sz]
        if k in track_idx:
            vals, vecs = np.linalg.eigh(terms.at(*sched.evaluate(float(s))))
            pg = degenerate_ground_projector(vals, vecs)
            if pure:
                qa[k] = np.real(st.conj() @ (pg @ st))
            else:
                qa[k] = np.real(np.trace(st @ pg))
    final = states[-1]
    cls = classical_projector(net)
    if pure:
        q_cl = float(np.real(final.conj() @ (cls @ final)))
    else:
        q_cl = float(np.real(np.trace(final @ cls)))
    q_l = _logical_quality(pols[-1], targets)
    return EvolutionResult(s=s_eval, q_adiabatic=qa,
                           output_polarizations=pols, final_state=final,
                           q_classical=q_cl, q_logical=q_l,
                           runrate=runrate, pure=pure)


METRICS = ("adiabatic", "classical", "logical")


def run_metric(result: EvolutionResult, metric: str) -> float:
    """Scalar end-of-run quality for one of the three success metrics."""
    if metric == "adiabatic":
        return result.q_adiabatic_final
    if metric == "classical":
        return result.q_classical
    if metric == "logical":
        return result.q_logical
    raise DynamicsError(f"unknown metric {metric!r}")

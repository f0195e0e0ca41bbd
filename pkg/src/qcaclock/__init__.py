"""Desk-scale simulator of adiabatic tunnel-barrier clocking in two-state
quantum-dot cellular automata networks."""

from .devices import build_device, inverter, majority, wire
from .lvn import DissipationSpec, evolve
from .icha import evolve_icha
from .network import QcaNetwork, classical_ground
from .quantum import build_hamiltonian, fit_min_gap, spectrum_sweep
from .schedule import Schedule, parse_schedule

__all__ = [
    "DissipationSpec",
    "QcaNetwork",
    "Schedule",
    "build_device",
    "build_hamiltonian",
    "classical_ground",
    "evolve",
    "evolve_icha",
    "fit_min_gap",
    "inverter",
    "majority",
    "parse_schedule",
    "spectrum_sweep",
    "wire",
]

__version__ = "0.1.0"

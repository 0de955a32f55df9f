"""Sensor model: dressed-state Hamiltonian, RK4 integration and ideal response."""

from .forward import ForwardModel, simulate_traces
from .hamiltonian import HamiltonianTerms, build_hamiltonian, fastest_rate, hamiltonian_terms
from .ideal import harmonic_state, ideal_response, rabi_period
from .integrator import (
    RungeKutta4,
    default_step,
    final_state,
    integrate_response,
    integrate_states,
    max_step,
    survival,
)

__all__ = [
    "ForwardModel",
    "simulate_traces",
    "HamiltonianTerms",
    "build_hamiltonian",
    "fastest_rate",
    "hamiltonian_terms",
    "harmonic_state",
    "ideal_response",
    "rabi_period",
    "RungeKutta4",
    "default_step",
    "final_state",
    "integrate_response",
    "integrate_states",
    "max_step",
    "survival",
]

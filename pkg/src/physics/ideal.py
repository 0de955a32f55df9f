"""Closed-form response in the harmonic working regime (xi = 0, weak target)."""

import math

import numpy as np

from ..errors import PhysicsInputError
from ..models.sensor import Level, QuantumState, TargetParams


def rabi_period(tgt: TargetParams) -> float:
    """t_R = 2 pi sqrt2 / Omega_tg."""
    if tgt.rabi <= 0:
        raise PhysicsInputError("Rabi period undefined for Omega_tg = 0")
    return 2.0 * math.pi * math.sqrt(2.0) / tgt.rabi


def ideal_response(tgt: TargetParams, t):
    """cos^2(pi t / t_R); t may be a scalar or an array."""
    period = rabi_period(tgt)
    value = np.cos(np.pi * np.asarray(t, dtype=float) / period) ** 2
    return float(value) if np.ndim(value) == 0 else value


def harmonic_state(tgt: TargetParams, t: float) -> QuantumState:
    """cos(Omega_tg t / 2 sqrt2)|D> + i sin(Omega_tg t / 2 sqrt2)|0'>."""
    angle = tgt.rabi * t / (2.0 * math.sqrt(2.0))
    amps = np.zeros(4, dtype=complex)
    amps[Level.DARK] = math.cos(angle)
    amps[Level.PRIME] = 1j * math.sin(angle)
    return QuantumState(amps, t)

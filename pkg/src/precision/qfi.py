"""Pure-state quantum Fisher information by finite differences of the state.

    I = 4 [ <d psi|d psi> - |<psi|d psi>|^2 ]

The derivative is a central difference in the parameter; the whole stencil is
integrated in one batched call so every member shares the same time steps.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import replace
from typing import Optional

import numpy as np

from ..errors import PhysicsInputError
from ..models.precision import Parameter, QfiResult
from ..models.sensor import SensorConfig, TargetParams
from ..physics.integrator import integrate_states
from ..units import T0, khz_to_rad

logger = logging.getLogger(__name__)

FD_RELATIVE = 1e-6
N_POINTS = 101
N_SHOTS = 100

StatesFn = Callable[[np.ndarray], np.ndarray]


def qfi_from_states(psi: np.ndarray, d_psi: np.ndarray) -> float:
    """I from a normalized state and its parameter derivative."""
    overlap = np.vdot(psi, d_psi)
    return float(4.0 * (np.vdot(d_psi, d_psi).real - abs(overlap) ** 2))


def finite_difference_qfi(
    states: StatesFn, theta: float, h: float, lower: float = 0.0
) -> tuple[float, float]:
    """(I at step h, I at step h/2) for a parametrized state family.

    `states` maps an array of parameter values to stacked 4-vectors. Central
    differences are used unless theta - h would fall below `lower`, the edge of
    the parameter domain, in which case forward differences are used.
    """
    if not h > 0:
        raise PhysicsInputError("fd_step must be positive")
    values = np.array([theta, theta + h, theta - h, theta + h / 2, theta - h / 2])
    central = values[2] >= lower
    if not central:
        values = np.array([theta, theta + h, theta, theta + h / 2, theta])
    psi = states(values)
    scale = 2.0 if central else 1.0
    coarse = qfi_from_states(psi[0], (psi[1] - psi[2]) / (scale * h))
    fine = qfi_from_states(psi[0], (psi[3] - psi[4]) / (scale * h / 2))
    return coarse, fine


def default_fd_step(tgt: TargetParams, parameter: Parameter) -> float:
    """1e-6 of the parameter scale; xi and Omega_tg = 0 use 2pi x 1 kHz as scale."""
    scale = tgt.rabi if parameter == "omega" and tgt.rabi > 0 else float(khz_to_rad(1.0))
    return FD_RELATIVE * scale


def _with(tgt: TargetParams, parameter: Parameter, value: float) -> TargetParams:
    if parameter == "omega":
        return replace(tgt, rabi=float(value))
    return replace(tgt, detuning=float(value))


def precision_bound(fisher: float, n_total: int) -> float:
    """1 / sqrt(N_T I)."""
    if fisher <= 0:
        return math.inf
    return 1.0 / math.sqrt(n_total * fisher)


def qfi(
    cfg: SensorConfig,
    tgt: TargetParams,
    parameter: Parameter,
    t0: float = T0,
    fd_step: Optional[float] = None,
    n_points: int = N_POINTS,
    n_shots: int = N_SHOTS,
    step: Optional[float] = None,
) -> QfiResult:
    """Fisher information of the integrated state at t0 and the implied bound."""
    if parameter not in ("omega", "xi"):
        raise PhysicsInputError(f"parameter must be 'omega' or 'xi', got {parameter!r}")
    h = fd_step if fd_step is not None else default_fd_step(tgt, parameter)
    theta = tgt.rabi if parameter == "omega" else tgt.detuning

    def states(values: np.ndarray) -> np.ndarray:
        batch = [_with(tgt, parameter, v) for v in values]
        return integrate_states(cfg, batch, [t0], step)[:, -1]

    lower = 0.0 if parameter == "omega" else -math.inf
    coarse, fine = finite_difference_qfi(states, theta, h, lower)
    change = abs(coarse - fine) / max(abs(fine), np.finfo(float).tiny)
    if change > 0.01:
        logger.warning(
            "QFI for %s changed by %.2g%% under fd step halving; not converged",
            parameter,
            100 * change,
        )
    n_total = n_points * n_shots
    return QfiResult(
        parameter=parameter,
        target=tgt,
        time=t0,
        fisher=coarse,
        bound=precision_bound(coarse, n_total),
        n_total=n_total,
        fd_step=h,
        relative_change=change,
    )

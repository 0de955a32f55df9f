"""Parameter grids, acquisition windows and fixed target lists."""

from __future__ import annotations

import numpy as np

from ..errors import PhysicsInputError
from ..models.acquisition import GridSpec
from ..models.sensor import TargetParams
from ..units import T0, khz_to_rad

# Lower Omega_tg/2pi bounds (kHz) of the reduced-range datasets.
OMEGA_THRESHOLDS_KHZ = (3.4, 8.2, 13.0, 17.8, 22.6)

# Windows used for the separability comparison, in seconds.
SEPARABILITY_WINDOWS = {
    "0.5-1 t0": (0.5 * T0, 1.0 * T0),
    "2.5-3 t0": (2.5 * T0, 3.0 * T0),
    "9.5-10 t0": (9.5 * T0, 10.0 * T0),
    "1.34-1.41 ms": (1.34e-3, 1.41e-3),
}

SWEEP_XI_KHZ = (-0.27, -0.21, -0.15, -0.09, -0.03, 0.03, 0.09, 0.15, 0.21, 0.27)
XI_SWEEP_OMEGA_KHZ = (9.31, 15.68)
SWEEP_OMEGA_KHZ = tuple(8.25 + 2.0 * i for i in range(9))
OMEGA_SWEEP_XI_KHZ = (-0.09, 0.03)


def _axis(lo: float, hi: float, n: int, name: str) -> np.ndarray:
    if n < 1:
        raise PhysicsInputError(f"n_{name} must be >= 1")
    if hi < lo:
        raise PhysicsInputError(f"{name} range is reversed: [{lo}, {hi}]")
    if n == 1:
        return np.array([float(lo)])
    values = np.linspace(lo, hi, n)
    values[0], values[-1] = lo, hi
    return values


def grid_axes(spec: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """(Omega_tg, xi) node values in kHz."""
    omega = _axis(spec.omega_range[0], spec.omega_range[1], spec.n_omega, "omega")
    xi = _axis(spec.xi_range[0], spec.xi_range[1], spec.n_xi, "xi")
    return omega, xi


def build_grid(
    omega_range: tuple[float, float],
    n_omega: int,
    xi_range: tuple[float, float],
    n_xi: int,
) -> list[TargetParams]:
    """Targets on an inclusive, equally spaced grid (kHz in, rad/s out).

    Omega_tg varies slowest: index = i_omega * n_xi + i_xi.
    """
    spec = GridSpec(tuple(omega_range), n_omega, tuple(xi_range), n_xi)
    omega, xi = grid_axes(spec)
    return [TargetParams.from_khz(o, x) for o in omega for x in xi]


def filter_omega(targets: list[TargetParams], omega_min_khz: float) -> list[int]:
    """Indices of targets with Omega_tg/2pi >= omega_min_khz."""
    bound = float(khz_to_rad(omega_min_khz)) * (1 - 1e-12)
    return [i for i, t in enumerate(targets) if t.rabi >= bound]


def sweep_targets() -> list[TargetParams]:
    """The 38 off-grid targets: two xi sweeps then two Omega sweeps."""
    targets = [
        TargetParams.from_khz(omega, xi)
        for omega in XI_SWEEP_OMEGA_KHZ
        for xi in SWEEP_XI_KHZ
    ]
    targets += [
        TargetParams.from_khz(omega, xi)
        for xi in OMEGA_SWEEP_XI_KHZ
        for omega in SWEEP_OMEGA_KHZ
    ]
    return targets

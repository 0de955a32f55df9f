"""Precision-analysis results: Fisher information, posteriors and estimator spreads."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .sensor import TargetParams

Parameter = Literal["omega", "xi"]


@dataclass(frozen=True)
class QfiResult:
    """Fisher information of |psi(t)> for one parameter and the bound it implies."""

    parameter: Parameter
    target: TargetParams
    time: float
    fisher: float  # 1/(rad/s)^2
    bound: float  # rad/s
    n_total: int
    fd_step: float
    relative_change: float  # |I(h) - I(h/2)| / I(h/2)

    @property
    def converged(self) -> bool:
        return self.relative_change <= 0.01


@dataclass
class Posterior:
    """Normalized posterior density on a rectangular (Omega_tg, xi) grid in rad/s."""

    omega: np.ndarray  # (n_omega,)
    xi: np.ndarray  # (n_xi,)
    log_likelihood: np.ndarray  # (n_omega, n_xi)
    density: np.ndarray  # (n_omega, n_xi), integrates to 1 by the trapezoid rule
    mean: np.ndarray  # (2,)
    std: np.ndarray  # (2,)
    boundary_mass: float

    @property
    def truncated(self) -> bool:
        return self.boundary_mass > 0.01

    @property
    def mode(self) -> tuple[float, float]:
        i, j = np.unravel_index(int(np.argmax(self.log_likelihood)), self.log_likelihood.shape)
        return float(self.omega[i]), float(self.xi[j])


@dataclass
class EstimatorStats:
    """Empirical moments of an estimator over repeated shot-noise records."""

    estimator: str
    target: TargetParams
    n_trials: int
    estimates: np.ndarray  # (n_trials, 2) rad/s
    mean: np.ndarray  # (2,)
    std: np.ndarray  # (2,)
    qfi_bounds: Optional[np.ndarray] = None  # (2,) rad/s, reported alongside only

"""Grid Bayesian estimator of (Omega_tg, xi) with a Gaussian shot-noise likelihood.

    log p(X | theta) = sum_j [ -(x_j - x~_j(theta))^2 / (2 sigma^2) - log(sqrt(2 pi) sigma) ]

with sigma = 1/sqrt(N_m) and a uniform prior. The search runs a coarse pass
over the whole range, then zooms onto mean +- k sigma windows. Inside a
zoom window the forward traces are computed exactly on a small lattice and
interpolated with bicubic splines onto the quadrature grid.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import RectBivariateSpline

from ..errors import NumericalError, PhysicsInputError
from ..models.acquisition import ShotRecord
from ..models.precision import Posterior
from ..models.sensor import SensorConfig, TargetParams
from ..output.csv_writer import write_csv
from ..physics.forward import ForwardModel
from ..units import khz_to_rad, rad_to_khz

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BayesSearch:
    """Search ranges (kHz) and grid sizes of the posterior evaluation."""

    omega_range_khz: tuple[float, float] = (1.0, 25.0)
    xi_range_khz: tuple[float, float] = (-0.3, 0.3)
    coarse_nodes: int = 41
    posterior_nodes: int = 201
    forward_nodes: int = 15
    zoom_sigmas: float = 5.0
    zoom_passes: int = 2
    coarse_secular: bool = True

    def __post_init__(self):
        if self.coarse_nodes < 2 or self.posterior_nodes < 2:
            raise PhysicsInputError("posterior grids need at least 2 nodes per axis")
        if self.forward_nodes < 4:
            raise PhysicsInputError("bicubic interpolation needs at least 4 lattice nodes")
        if self.zoom_passes < 0 or not self.zoom_sigmas > 0:
            raise PhysicsInputError("invalid zoom settings")
        for lo, hi in (self.omega_range_khz, self.xi_range_khz):
            if not hi > lo:
                raise PhysicsInputError(f"search range is empty or reversed: [{lo}, {hi}]")


Window = tuple[tuple[float, float], tuple[float, float]]


def log_likelihood(record: np.ndarray, traces: np.ndarray, sigma: float) -> np.ndarray:
    """Gaussian log-likelihood of `record` (N_p,) against traces (..., N_p)."""
    if not sigma > 0:
        raise PhysicsInputError("likelihood sigma must be positive")
    residual = traces - record
    n_points = record.shape[-1]
    return -np.sum(residual**2, axis=-1) / (2.0 * sigma**2) - n_points * math.log(
        math.sqrt(2.0 * math.pi) * sigma
    )


def _cell_weights(values: np.ndarray) -> np.ndarray:
    """Trapezoid quadrature weights of a 1-D node set."""
    if values.size == 1:
        return np.ones(1)
    gaps = np.diff(values)
    weights = np.zeros(values.size)
    weights[:-1] += gaps / 2
    weights[1:] += gaps / 2
    return weights


def normalize(omega: np.ndarray, xi: np.ndarray, loglik: np.ndarray) -> Posterior:
    """Posterior density, moments and boundary mass from a log-likelihood table."""
    if not np.all(np.isfinite(loglik)):
        raise NumericalError("log-likelihood has non-finite entries")
    weight = np.exp(loglik - np.max(loglik))
    z = trapezoid(trapezoid(weight, xi, axis=1), omega)
    if not (z > 0 and math.isfinite(z)):
        raise NumericalError("posterior normalization failed")
    density = weight / z

    marginal_omega = trapezoid(density, xi, axis=1)
    marginal_xi = trapezoid(density, omega, axis=0)
    mean = np.array([trapezoid(omega * marginal_omega, omega), trapezoid(xi * marginal_xi, xi)])
    var = np.array(
        [
            trapezoid((omega - mean[0]) ** 2 * marginal_omega, omega),
            trapezoid((xi - mean[1]) ** 2 * marginal_xi, xi),
        ]
    )

    mass = density * np.outer(_cell_weights(omega), _cell_weights(xi))
    interior = mass[1:-1, 1:-1].sum() if min(mass.shape) > 2 else 0.0
    return Posterior(
        omega=omega,
        xi=xi,
        log_likelihood=loglik,
        density=density,
        mean=mean,
        std=np.sqrt(np.maximum(var, 0.0)),
        boundary_mass=float(max(mass.sum() - interior, 0.0)),
    )


def grid_posterior(
    record: np.ndarray,
    sigma: float,
    omega: np.ndarray,
    xi: np.ndarray,
    traces: np.ndarray,
) -> Posterior:
    """Posterior on a fixed grid given traces with shape (n_omega, n_xi, N_p)."""
    record = np.asarray(record, dtype=float)
    if traces.shape != (omega.size, xi.size, record.size):
        raise PhysicsInputError(
            f"traces shape {traces.shape} does not match grid {omega.size}x{xi.size} "
            f"and record length {record.size}"
        )
    return normalize(omega, xi, log_likelihood(record, traces, sigma))


def exact_traces(forward: ForwardModel, omega: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """Forward traces at every grid node: (n_omega, n_xi, N_p)."""
    targets = [TargetParams(float(o), float(x)) for o in omega for x in xi]
    return forward.traces(targets).reshape(omega.size, xi.size, -1)


def interpolated_traces(
    forward: ForwardModel,
    omega: np.ndarray,
    xi: np.ndarray,
    lattice_nodes: int,
) -> np.ndarray:
    """Traces on (omega, xi) by bicubic interpolation from a coarser exact lattice."""
    if lattice_nodes >= min(omega.size, xi.size):
        return exact_traces(forward, omega, xi)
    lat_omega = np.linspace(omega[0], omega[-1], lattice_nodes)
    lat_xi = np.linspace(xi[0], xi[-1], lattice_nodes)
    lattice = exact_traces(forward, lat_omega, lat_xi)
    out = np.empty((omega.size, xi.size, lattice.shape[-1]))
    for j in range(lattice.shape[-1]):
        spline = RectBivariateSpline(lat_omega, lat_xi, lattice[:, :, j], kx=3, ky=3)
        out[:, :, j] = spline(omega, xi)
    return np.clip(out, 0.0, 1.0)


def _zoom(posterior: Posterior, search: BayesSearch, min_half: np.ndarray) -> Window:
    """mean +- k sigma, at least min_half wide, clipped to the search ranges."""
    bounds = (
        tuple(float(v) for v in khz_to_rad(search.omega_range_khz)),
        tuple(float(v) for v in khz_to_rad(search.xi_range_khz)),
    )
    window = []
    for k, (lo, hi) in enumerate(bounds):
        half = max(search.zoom_sigmas * posterior.std[k], min_half[k])
        a, b = max(posterior.mean[k] - half, lo), min(posterior.mean[k] + half, hi)
        if k == 0:
            a = max(a, 0.0)
        window.append((a, b))
    return window[0], window[1]


def _axis(window: tuple[float, float], n: int) -> np.ndarray:
    return np.linspace(window[0], window[1], n)


class PosteriorSearch:
    """Coarse-to-fine posterior evaluation sharing memoized forward models."""

    def __init__(
        self,
        cfg: SensorConfig,
        times: np.ndarray,
        search: BayesSearch = BayesSearch(),
        step: Optional[float] = None,
        workers: int = 1,
        cache_dir: Optional[Path] = None,
    ):
        self.cfg = cfg
        self.search = search
        self.times = np.asarray(times, dtype=float)
        self.forward = ForwardModel(cfg, self.times, step, workers, cache_dir)
        coarse_cfg = replace(cfg, secular=True) if search.coarse_secular else cfg
        self.coarse_forward = (
            self.forward
            if coarse_cfg == cfg
            else ForwardModel(coarse_cfg, self.times, None, workers, cache_dir)
        )
        self._trace_cache: dict[Window, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    def coarse_grid(self) -> tuple[np.ndarray, np.ndarray]:
        s = self.search
        omega = _axis(khz_to_rad(s.omega_range_khz), s.coarse_nodes)
        xi = _axis(khz_to_rad(s.xi_range_khz), s.coarse_nodes)
        return omega, xi

    def window_traces(self, window: Window) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(omega, xi, traces) of the quadrature grid over `window`, memoized."""
        if window not in self._trace_cache:
            n = self.search.posterior_nodes
            omega, xi = _axis(window[0], n), _axis(window[1], n)
            traces = interpolated_traces(self.forward, omega, xi, self.search.forward_nodes)
            self._trace_cache[window] = (omega, xi, traces)
        return self._trace_cache[window]

    def on_window(self, record: np.ndarray, sigma: float, window: Window) -> Posterior:
        omega, xi, traces = self.window_traces(window)
        return grid_posterior(record, sigma, omega, xi, traces)

    def find_window(self, record: np.ndarray, sigma: float) -> tuple[Window, Posterior]:
        """Run the coarse pass and the zoom passes; returns the final window and posterior."""
        omega, xi = self.coarse_grid()
        posterior = grid_posterior(
            record, sigma, omega, xi, exact_traces(self.coarse_forward, omega, xi)
        )
        logger.info(
            "coarse posterior mean (%.5g, %.5g) kHz",
            *rad_to_khz(posterior.mean),
        )
        min_half = 3.0 * np.array([omega[1] - omega[0], xi[1] - xi[0]])
        window = _zoom(posterior, self.search, min_half)
        for i in range(self.search.zoom_passes):
            posterior = self.on_window(record, sigma, window)
            logger.info(
                "zoom pass %d: mean (%.6g, %.6g) kHz, std (%.3g, %.3g) kHz",
                i + 1,
                *rad_to_khz(posterior.mean),
                *rad_to_khz(posterior.std),
            )
            if i + 1 < self.search.zoom_passes:
                if posterior.truncated:
                    # keep the current width and recentre
                    min_half = np.array([np.ptp(window[0]), np.ptp(window[1])]) / 2
                else:
                    min_half = 3.0 * np.array(
                        [posterior.omega[1] - posterior.omega[0], posterior.xi[1] - posterior.xi[0]]
                    )
                window = _zoom(posterior, self.search, min_half)
        if self.search.zoom_passes == 0:
            posterior = self.on_window(record, sigma, window)
        return window, posterior


def bayes_posterior(
    record: ShotRecord,
    cfg: SensorConfig,
    search: BayesSearch = BayesSearch(),
    n_shots: Optional[int] = None,
    step: Optional[float] = None,
    workers: int = 1,
) -> Posterior:
    """Posterior over (Omega_tg, xi) for one measured record.

    `n_shots` sets sigma = 1/sqrt(N_m); it defaults to the record's own shot
    count and is required for noiseless records.
    """
    n_shots = n_shots if n_shots is not None else record.n_shots
    if n_shots is None or n_shots < 1:
        raise PhysicsInputError("N_m >= 1 is needed to set the likelihood width")
    sigma = 1.0 / math.sqrt(n_shots)
    _, posterior = PosteriorSearch(cfg, record.times, search, step, workers).find_window(
        record.p, sigma
    )
    if posterior.truncated:
        logger.warning(
            "posterior truncated: %.2g%% of the mass lies in the outermost cells",
            100 * posterior.boundary_mass,
        )
    return posterior


def write_posterior(path: Path, posterior: Posterior, comments: Optional[dict] = None) -> Path:
    """CSV of omega_tg_khz, xi_khz and the probability mass of each node's cell."""
    mass = posterior.density * np.outer(_cell_weights(posterior.omega), _cell_weights(posterior.xi))
    omega_khz = rad_to_khz(posterior.omega)
    xi_khz = rad_to_khz(posterior.xi)
    rows = (
        (float(omega_khz[i]), float(xi_khz[j]), float(mass[i, j]))
        for i in range(posterior.omega.size)
        for j in range(posterior.xi.size)
    )
    return write_csv(path, ["omega_tg_khz", "xi_khz", "prob"], rows, comments)

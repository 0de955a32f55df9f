"""Precision analysis: Fisher-information bounds and the grid Bayesian estimator."""

from .bayes import (
    BayesSearch,
    PosteriorSearch,
    bayes_posterior,
    exact_traces,
    grid_posterior,
    interpolated_traces,
    log_likelihood,
    normalize,
    write_posterior,
)
from .estimators import BayesEstimator, Estimator, NetworkEstimator, estimator_statistics
from .qfi import (
    default_fd_step,
    finite_difference_qfi,
    precision_bound,
    qfi,
    qfi_from_states,
)

__all__ = [
    "BayesSearch",
    "PosteriorSearch",
    "bayes_posterior",
    "exact_traces",
    "grid_posterior",
    "interpolated_traces",
    "log_likelihood",
    "normalize",
    "write_posterior",
    "BayesEstimator",
    "Estimator",
    "NetworkEstimator",
    "estimator_statistics",
    "default_fd_step",
    "finite_difference_qfi",
    "precision_bound",
    "qfi",
    "qfi_from_states",
]

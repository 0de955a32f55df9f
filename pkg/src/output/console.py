"""Console output formatters using Rich."""

from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING

import numpy as np
from rich.console import Console
from rich.table import Table

from ..models import (
    Dataset,
    EstimatorStats,
    Metrics,
    Posterior,
    QfiResult,
    RestartSummary,
    TrainReport,
)
from ..units import rad_to_khz, s_to_ms

if TYPE_CHECKING:
    from ..acquisition.separability import SeparabilityResult

console = Console()
err_console = Console(stderr=True)


def _khz(value: float, digits: int = 6) -> str:
    if not np.isfinite(value):
        return "-"
    return f"{float(rad_to_khz(value)):.{digits}g}"


def _pct(value: float) -> str:
    return "-" if not np.isfinite(value) else f"{100 * value:.3f}%"


def print_trace_summary(times: np.ndarray, p_d: np.ndarray, ideal: np.ndarray | None = None):
    console.print(
        f"[bold]P_D[/bold] at {times.size} instants over "
        f"[{float(s_to_ms(times[0])):.4g}, {float(s_to_ms(times[-1])):.4g}] ms"
    )
    console.print(f"  min {p_d.min():.6f}  max {p_d.max():.6f}  final {p_d[-1]:.6f}")
    if ideal is not None:
        console.print(f"  max |P_D - cos^2| = {np.max(np.abs(p_d - ideal)):.3e}")


def print_dataset_summary(dataset: Dataset):
    table = Table(title="Dataset")
    table.add_column("split")
    table.add_column("examples", justify="right")
    for split, count in dataset.counts().items():
        table.add_row(split.value, str(count))
    table.add_row("[bold]total[/bold]", str(len(dataset)))
    console.print(table)
    kind = "noiseless" if dataset.noiseless else f"N_m = {dataset.plan.n_shots}"
    console.print(f"  {kind}, {dataset.plan.repetitions} repetition(s), seed {dataset.plan.seed}")


def print_train_summary(report: TrainReport):
    console.print(
        f"[bold]Stopped[/bold] at epoch {report.stop_epoch} ({report.stop_reason}); "
        f"best epoch {report.best_epoch}"
    )
    table = Table()
    table.add_column("split")
    table.add_column("cost", justify="right")
    for name, value in report.final_costs().items():
        table.add_row(name, f"{value:.6e}")
    console.print(table)
    if report.metrics is not None:
        print_metrics(report.metrics)


def print_metrics(metrics: Metrics, title: str = "Metrics"):
    table = Table(title=title)
    table.add_column("quantity")
    table.add_column("value", justify="right")
    table.add_row("examples", str(metrics.n_examples))
    table.add_row("cost", f"{metrics.cost:.6e}")
    table.add_row("F1", _pct(metrics.f1))
    table.add_row("F2", _pct(metrics.f2))
    if metrics.f2_excluded:
        table.add_row("F2 excluded rows", str(metrics.f2_excluded))
    for name, fit in zip(("Omega_tg", "xi"), metrics.fits):
        table.add_row(f"{name} alpha / beta", f"{fit.alpha:.6f} / {fit.beta:.3e}")
        table.add_row(f"{name} R", f"{fit.r:.6f}")
    table.add_row("pooled R", f"{metrics.pooled_r:.6f}")
    console.print(table)


def print_restart_summary(summary: RestartSummary):
    table = Table(title="Restarts")
    table.add_column("seed", justify="right")
    table.add_column("test cost", justify="right")
    for seed, value in zip(summary.seeds, summary.test_costs):
        table.add_row(str(seed), f"{value:.6e}")
    console.print(table)
    console.print(f"  mean {summary.mean:.6e}  std {summary.std:.3e}")


def print_qfi(results: Sequence[QfiResult]):
    table = Table(title="Quantum Fisher information")
    table.add_column("parameter")
    table.add_column("t0 (ms)", justify="right")
    table.add_column("I (1/(rad/s)^2)", justify="right")
    table.add_column("N_T", justify="right")
    table.add_column("bound (2pi x kHz)", justify="right")
    table.add_column("converged")
    for r in results:
        table.add_row(
            r.parameter,
            f"{float(s_to_ms(r.time)):.4g}",
            f"{r.fisher:.6e}",
            str(r.n_total),
            _khz(r.bound, 4),
            "yes" if r.converged else f"[yellow]no ({100 * r.relative_change:.2g}%)[/yellow]",
        )
    console.print(table)


def print_posterior(posterior: Posterior):
    table = Table(title="Posterior")
    table.add_column("parameter")
    table.add_column("mean (2pi x kHz)", justify="right")
    table.add_column("std (2pi x kHz)", justify="right")
    for k, name in enumerate(("Omega_tg", "xi")):
        table.add_row(name, _khz(posterior.mean[k], 7), _khz(posterior.std[k], 3))
    console.print(table)
    if posterior.truncated:
        console.print(
            f"[yellow]Warning: {100 * posterior.boundary_mass:.2g}% of the posterior mass "
            "lies in the outermost grid cells[/yellow]"
        )


def print_spread(stats: EstimatorStats):
    table = Table(title=f"{stats.estimator} estimator over {stats.n_trials} trials")
    table.add_column("parameter")
    table.add_column("target", justify="right")
    table.add_column("mean", justify="right")
    table.add_column("std", justify="right")
    table.add_column("QFI bound", justify="right")
    truth = (stats.target.rabi, stats.target.detuning)
    for k, name in enumerate(("Omega_tg", "xi")):
        bound = stats.qfi_bounds[k] if stats.qfi_bounds is not None else float("nan")
        table.add_row(
            f"{name} (2pi x kHz)",
            _khz(truth[k]),
            _khz(stats.mean[k], 7),
            _khz(stats.std[k], 3),
            _khz(bound, 3),
        )
    console.print(table)


def print_separability(results: Sequence[SeparabilityResult]):
    table = Table(title="Trace separability")
    table.add_column("window (ms)")
    table.add_column("max |dP_D|", justify="right")
    table.add_column("2 sigma", justify="right")
    table.add_column("separable")
    for r in results:
        lo, hi = (float(s_to_ms(t)) for t in r.window)
        table.add_row(
            f"[{lo:.4g}, {hi:.4g}]",
            f"{r.max_separation:.4f}",
            f"{r.threshold:.4f}",
            "yes" if r.separable else "no",
        )
    console.print(table)

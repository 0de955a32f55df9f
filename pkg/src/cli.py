"""Main CLI application."""

from __future__ import annotations

import logging
import sys
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path
from typing import Any, Iterator, Optional, Tuple

import click
import numpy as np
import typer

from .acquisition import (
    SEPARABILITY_WINDOWS,
    StreamFactory,
    sweep_targets,
    generate_dataset,
    max_separation,
    noiseless_record,
    read_dataset,
    sample_shots,
    write_dataset,
)
from .acquisition.io import read_dataset_meta
from .config import RunConfig, config_hash, effective_threads, load_config
from .errors import FormatError, NumericalError, QsenseError, TrainingDiverged
from .log import setup_logging
from .models import (
    AcquisitionPlan,
    GridSpec,
    ResponseTrace,
    ShotRecord,
    Split,
    TargetParams,
)
from .models.files import ModelFile, TrainingRecord
from .network import (
    TrainingData,
    evaluate,
    evaluate_outputs,
    forward,
    init_network,
    load_model,
    restart_summary,
    save_model,
    to_model_file,
    train as train_network,
    write_report,
)
from .output import (
    column_floats,
    console,
    err_console,
    print_dataset_summary,
    print_json,
    print_metrics,
    print_posterior,
    print_qfi,
    print_restart_summary,
    print_separability,
    print_spread,
    print_train_summary,
    print_trace_summary,
    read_csv,
    write_csv,
)
from .physics import ForwardModel, default_step, ideal_response, integrate_response
from .precision import (
    BayesEstimator,
    NetworkEstimator,
    bayes_posterior,
    estimator_statistics,
    qfi as qfi_result,
    write_posterior,
)
from .units import T0, khz_to_rad, ms_to_s, rad_to_khz

logger = logging.getLogger(__name__)

EXIT_ERROR = 1
EXIT_NUMERICAL = 2
EXIT_VALIDATION = 3

app = typer.Typer(
    name="qsense",
    help="Simulate a dressed-state 171Yb+ magnetometer and estimate (Omega_tg, xi)",
    add_completion=False,
)

# Global state set by the callback
_config: Optional[RunConfig] = None
_sequential = False


def get_config() -> RunConfig:
    global _config
    if _config is None:
        _config = RunConfig()
    return _config


@contextmanager
def handle_errors() -> Iterator[None]:
    """Map domain errors to exit codes: 2 for numerical failures, 1 otherwise."""
    try:
        yield
    except NumericalError as e:
        err_console.print(f"[red]Numerical error: {e}[/red]")
        raise typer.Exit(EXIT_NUMERICAL)
    except QsenseError as e:
        err_console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(EXIT_ERROR)


def run_meta(cfg: RunConfig, **extra: Any) -> dict[str, Any]:
    """Header comments every output file carries."""
    return {"config_hash": config_hash(cfg), **extra}


def integration_step(cfg: RunConfig, step_fraction: Optional[int] = None) -> float:
    fraction = cfg.acquisition.step_fraction if step_fraction is None else step_fraction
    return default_step(cfg.sensor_config(), fraction)


def model_seeds(model: ModelFile) -> dict[str, int]:
    if model.training is None:
        return {}
    return {
        "init_seed": model.training.init_seed,
        "dataset_seed": model.training.dataset_seed,
    }


def workers(cfg: RunConfig) -> int:
    return effective_threads(cfg, _sequential)


def refuse_overwrite(path: Path, force: bool) -> None:
    if path.exists() and not force:
        err_console.print(f"[red]Error: {path} exists; pass --force to overwrite[/red]")
        raise typer.Exit(EXIT_ERROR)


def fail_validation(message: str, strict: bool) -> None:
    """Report a validation warning; under --strict it ends the run with exit code 3."""
    err_console.print(f"[yellow]Warning: {message}[/yellow]")
    if strict:
        raise typer.Exit(EXIT_VALIDATION)


def read_record(path: Path, n_shots: Optional[int] = None) -> ShotRecord:
    """Load a record CSV written by `simulate`: t_s plus p_shot (preferred) or p_d."""
    meta, header, rows = read_csv(path)
    times = column_floats(header, rows, "t_s")
    column = "p_shot" if "p_shot" in header else "p_d"
    p = column_floats(header, rows, column)
    if n_shots is None and column == "p_shot" and meta.get("n_shots"):
        n_shots = int(meta["n_shots"])
    return ShotRecord(times=times, p=p, n_shots=n_shots)


def same_window(times: np.ndarray, window: tuple[float, float], n_points: int) -> bool:
    if times.size != n_points:
        return False
    expected = np.linspace(window[0], window[1], n_points)
    return bool(np.allclose(times, expected, rtol=1e-9, atol=1e-12))


@app.callback()
def main_callback(
    config: Optional[Path] = typer.Option(None, "--config", "-c", help="Path to TOML run config"),
    verbose: int = typer.Option(0, "--verbose", "-v", count=True, help="-v info, -vv debug"),
    sequential: bool = typer.Option(False, "--sequential", help="Disable worker threads"),
):
    """Global options shared by every command."""
    global _config, _sequential
    setup_logging(verbose)
    _sequential = sequential
    with handle_errors():
        _config = load_config(config)


# =============================================================================
# Sensor model
# =============================================================================


@app.command()
def simulate(
    omega: float = typer.Option(..., "--omega", help="Omega_tg/2pi in kHz"),
    xi: float = typer.Option(0.0, "--xi", help="xi/2pi in kHz"),
    window: Tuple[float, float] = typer.Option((0.0, 1.0), "--window", help="Window in t0"),
    points: int = typer.Option(201, "--points", "-n", help="Number of instants"),
    step_fraction: Optional[int] = typer.Option(
        None, "--step-fraction", help="RK4 steps per fastest period (default from config)"
    ),
    shots: Optional[int] = typer.Option(None, "--shots", help="Also sample N_m shots"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Shot-noise seed"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write t_s,p_d CSV here"),
    json_output: bool = typer.Option(False, "--json", "-j", help="Output as JSON"),
):
    """Integrate the sensor from |D> and report P_D(t)."""
    cfg = get_config()
    seed = cfg.run.seed if seed is None else seed
    with handle_errors():
        sensor = cfg.sensor_config()
        tgt = TargetParams.from_khz(omega, xi)
        plan = AcquisitionPlan.in_t0(
            window[0], window[1], n_points=points, n_shots=shots or 1, seed=seed
        )
        trace = integrate_response(sensor, tgt, plan.times(), integration_step(cfg, step_fraction))

        header = ["t_s", "p_d"]
        columns = [trace.times, trace.p_d]
        ideal = None
        if xi == 0.0 and tgt.rabi > 0:
            ideal = ideal_response(tgt, trace.times)
            header.append("p_ideal")
            columns.append(ideal)
        if shots is not None:
            record = sample_shots(trace, shots, StreamFactory(seed).trial(0))
            header.append("p_shot")
            columns.append(record.p)

        if out is not None:
            meta = run_meta(cfg, seed=seed, omega_tg_khz=omega, xi_khz=xi, n_shots=shots)
            write_csv(out, header, zip(*columns), meta)
            logger.info("wrote %s", out)

    if json_output:
        print_json({name: col for name, col in zip(header, columns)})
    else:
        print_trace_summary(trace.times, trace.p_d, ideal)
        if out is not None:
            console.print(f"Wrote {out}")


# =============================================================================
# Acquisition
# =============================================================================


@app.command("gen-dataset")
def gen_dataset(
    out: Path = typer.Argument(..., help="Dataset CSV to write"),
    noiseless: Optional[bool] = typer.Option(None, "--noiseless/--noisy", help="Shot noise"),
    shots: Optional[int] = typer.Option(None, "--shots", help="N_m per record"),
    reps: Optional[int] = typer.Option(None, "--reps", help="Noisy records per grid node"),
    window: Optional[Tuple[float, float]] = typer.Option(None, "--window", help="Window in t0"),
    points: Optional[int] = typer.Option(None, "--points", "-n", help="Instants per record"),
    omega_min: Optional[float] = typer.Option(None, "--omega-min", help="Grid start (kHz)"),
    omega_max: Optional[float] = typer.Option(None, "--omega-max", help="Grid end (kHz)"),
    n_omega: Optional[int] = typer.Option(None, "--n-omega", help="Omega_tg nodes"),
    xi_min: Optional[float] = typer.Option(None, "--xi-min", help="Grid start (kHz)"),
    xi_max: Optional[float] = typer.Option(None, "--xi-max", help="Grid end (kHz)"),
    n_xi: Optional[int] = typer.Option(None, "--n-xi", help="xi nodes"),
    omega_threshold: Optional[float] = typer.Option(
        None, "--omega-threshold", help="Keep only Omega_tg/2pi >= this (kHz)"
    ),
    split_by_target: Optional[bool] = typer.Option(
        None, "--split-by-target/--split-by-row", help="Keep a node's repetitions together"
    ),
    seed: Optional[int] = typer.Option(None, "--seed", help="Dataset seed"),
    cache: Optional[Path] = typer.Option(None, "--cache", help="Trace cache directory"),
    force: bool = typer.Option(False, "--force", "-f", help="Overwrite an existing dataset"),
    json_output: bool = typer.Option(False, "--json", "-j", help="Output as JSON"),
):
    """Simulate the training grid and write a dataset CSV plus its .meta.json sidecar."""
    refuse_overwrite(out, force)
    cfg = get_config()
    a, g = cfg.acquisition, cfg.grid
    with handle_errors():
        grid = GridSpec(
            omega_range=(
                g.omega_min_khz if omega_min is None else omega_min,
                g.omega_max_khz if omega_max is None else omega_max,
            ),
            n_omega=g.n_omega if n_omega is None else n_omega,
            xi_range=(
                g.xi_min_khz if xi_min is None else xi_min,
                g.xi_max_khz if xi_max is None else xi_max,
            ),
            n_xi=g.n_xi if n_xi is None else n_xi,
        )
        win = window if window is not None else a.window_t0
        plan = AcquisitionPlan.in_t0(
            win[0],
            win[1],
            n_points=a.n_points if points is None else points,
            n_shots=a.n_shots if shots is None else shots,
            repetitions=a.repetitions if reps is None else reps,
            seed=cfg.run.seed if seed is None else seed,
        )
        dataset = generate_dataset(
            cfg.sensor_config(),
            grid,
            plan,
            a.noiseless if noiseless is None else noiseless,
            split_by_target=a.split_by_target if split_by_target is None else split_by_target,
            omega_min_khz=omega_threshold,
            step=integration_step(cfg),
            workers=workers(cfg),
            cache_dir=cache,
        )
        write_dataset(out, dataset, config_hash(cfg))

    if json_output:
        print_json(
            {
                "path": str(out),
                "examples": len(dataset),
                "counts": {s.value: n for s, n in dataset.counts().items()},
                "seed": plan.seed,
                "config_hash": config_hash(cfg),
            }
        )
    else:
        print_dataset_summary(dataset)
        console.print(f"Wrote {out}")


@app.command()
def separability(
    omega: float = typer.Option(1.0, "--omega", help="Omega_tg/2pi in kHz"),
    xi_a: float = typer.Option(0.06, "--xi-a", help="First detuning (kHz)"),
    xi_b: float = typer.Option(0.12, "--xi-b", help="Second detuning (kHz)"),
    shots: int = typer.Option(100, "--shots", help="N_m behind the 2 sigma level"),
    points: int = typer.Option(101, "--points", "-n", help="Instants per window"),
    json_output: bool = typer.Option(False, "--json", "-j", help="Output as JSON"),
):
    """Compare the max trace difference of two targets with the shot-noise level."""
    cfg = get_config()
    with handle_errors():
        sensor = cfg.sensor_config()
        first = TargetParams.from_khz(omega, xi_a)
        second = TargetParams.from_khz(omega, xi_b)
        results = [
            max_separation(sensor, first, second, win, points, shots, integration_step(cfg))
            for win in SEPARABILITY_WINDOWS.values()
        ]

    if json_output:
        print_json(
            [
                {
                    "window": name,
                    "window_s": r.window,
                    "max_separation": r.max_separation,
                    "threshold": r.threshold,
                    "separable": r.separable,
                }
                for name, r in zip(SEPARABILITY_WINDOWS, results)
            ]
        )
    else:
        print_separability(results)


# =============================================================================
# Neural estimator
# =============================================================================


def _parse_seeds(seeds: Optional[str], default: int) -> list[int]:
    if not seeds:
        return [default]
    try:
        return [int(s) for s in seeds.split(",") if s.strip()]
    except ValueError:
        raise typer.BadParameter(f"--seeds must be comma-separated integers, got {seeds!r}")


@app.command()
def train(
    dataset_path: Path = typer.Argument(..., help="Dataset CSV"),
    out_dir: Optional[Path] = typer.Option(None, "--out-dir", "-o", help="Output directory"),
    optimizer: Optional[str] = typer.Option(None, "--optimizer", help="gd or lm"),
    seeds: Optional[str] = typer.Option(None, "--seeds", help="Comma-separated init seeds"),
    max_epochs: Optional[int] = typer.Option(None, "--max-epochs", help="Epoch cap"),
    json_output: bool = typer.Option(False, "--json", "-j", help="Output as JSON"),
):
    """Train the regressor; several --seeds give independent restarts."""
    cfg = get_config()
    if optimizer is not None and optimizer not in ("gd", "lm"):
        raise typer.BadParameter(f"--optimizer must be gd or lm, got {optimizer!r}")
    init_seeds = _parse_seeds(seeds, cfg.run.seed)
    out_dir = out_dir or Path(cfg.run.output_dir)
    summaries: list[dict[str, Any]] = []
    test_costs: list[float] = []

    with handle_errors():
        dataset = read_dataset(dataset_path)
        data = TrainingData.from_dataset(dataset)
        eval_split = Split.TEST if dataset.counts()[Split.TEST] else Split.TRAIN
        eval_mask = dataset.mask(eval_split)
        sizes = [dataset.plan.n_points, *cfg.train.hidden, 2]

        for seed in init_seeds:
            tcfg = cfg.train_config(seed)
            if optimizer is not None:
                tcfg = replace(tcfg, optimizer=optimizer)
            if max_epochs is not None:
                tcfg = replace(tcfg, max_epochs=max_epochs)
            net = init_network(seed, sizes, ranges=dataset.ranges)
            meta = run_meta(
                cfg, init_seed=seed, dataset_seed=dataset.plan.seed, optimizer=tcfg.optimizer
            )
            report_path = out_dir / f"report_seed{seed}.csv"
            try:
                trained, report = train_network(net, data, tcfg)
            except TrainingDiverged as e:
                if e.report is not None:
                    write_report(report_path, e.report, meta)
                raise

            report.metrics = evaluate(
                trained, dataset.inputs[eval_mask], dataset.targets[eval_mask], dataset.ranges
            )
            record = TrainingRecord(
                optimizer=tcfg.optimizer,
                init_seed=seed,
                dataset_seed=dataset.plan.seed,
                stop_epoch=report.stop_epoch,
                stop_reason=report.stop_reason,
                final_costs=report.final_costs(),
            )
            model_path = save_model(
                out_dir / f"model_seed{seed}.json",
                to_model_file(
                    trained, dataset.plan.window, dataset.plan.n_points, record, config_hash(cfg)
                ),
            )
            write_report(report_path, report, meta)

            costs = report.final_costs()
            test_costs.append(costs.get("test", costs["train"]))
            summaries.append(
                {
                    "seed": seed,
                    "model": str(model_path),
                    "report": str(report_path),
                    "stop_epoch": report.stop_epoch,
                    "stop_reason": report.stop_reason,
                    "costs": costs,
                    "f1": report.metrics.f1,
                    "f2": report.metrics.f2,
                }
            )
            if not json_output:
                console.print(f"[bold]seed {seed}[/bold] -> {model_path}")
                print_train_summary(report)

        summary = None
        if len(init_seeds) > 1:
            summary = restart_summary(init_seeds, test_costs)
            write_csv(
                out_dir / "restarts.csv",
                ["seed", "test_cost"],
                zip(summary.seeds, summary.test_costs),
                run_meta(cfg, dataset_seed=dataset.plan.seed),
                {"mean": summary.mean, "std": summary.std},
            )

    if json_output:
        payload: dict[str, Any] = {"runs": summaries}
        if summary is not None:
            payload["restarts"] = {"mean": summary.mean, "std": summary.std}
        print_json(payload)
    elif summary is not None:
        print_restart_summary(summary)


@app.command()
def predict(
    model_path: Path = typer.Argument(..., help="Model JSON"),
    dataset_path: Optional[Path] = typer.Option(None, "--dataset", help="Dataset CSV"),
    record_path: Optional[Path] = typer.Option(None, "--record", help="Record CSV"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write estimates CSV here"),
):
    """Estimate (Omega_tg, xi) in kHz for every row of a dataset or one record."""
    if (dataset_path is None) == (record_path is None):
        raise typer.BadParameter("give exactly one of --dataset or --record")
    cfg = get_config()
    with handle_errors():
        net, model = load_model(model_path)
        if dataset_path is not None:
            meta = read_dataset_meta(dataset_path)
            plan = meta.plan.to_plan()
            if plan.n_points != model.n_points or not np.allclose(
                plan.window, model.window_s, rtol=1e-9
            ):
                raise FormatError(
                    f"dataset window {plan.window} s / {plan.n_points} points does not match "
                    f"model window {model.window_s} s / {model.n_points} points"
                )
            inputs = read_dataset(dataset_path).inputs
        else:
            record = read_record(record_path)
            if not same_window(record.times, model.window_s, model.n_points):
                raise FormatError(
                    f"record instants do not match the model window {model.window_s} s "
                    f"with {model.n_points} points"
                )
            inputs = record.p[None, :]
        estimator = NetworkEstimator(net)
        times = np.linspace(model.window_s[0], model.window_s[1], model.n_points)
        estimates = np.array([estimator.estimate(ShotRecord(times, row, None)) for row in inputs])

    header = ["omega_hat_khz", "xi_hat_khz"]
    rows = rad_to_khz(estimates).tolist()
    if out is not None:
        with handle_errors():
            meta = run_meta(cfg, model=str(model_path), **model_seeds(model))
            write_csv(out, header, rows, meta)
        console.print(f"Wrote {len(rows)} estimate(s) to {out}")
    else:
        typer.echo(",".join(header))
        for omega_hat, xi_hat in rows:
            typer.echo(f"{omega_hat:.9g},{xi_hat:.9g}")


@app.command("evaluate")
def evaluate_cmd(
    model_path: Path = typer.Argument(..., help="Model JSON"),
    dataset_path: Optional[Path] = typer.Option(None, "--dataset", help="Dataset CSV"),
    split: str = typer.Option("test", "--split", help="train, validation, test or all"),
    sweep: bool = typer.Option(False, "--sweep", help="Score the 38 held-out sweep targets"),
    shots: Optional[int] = typer.Option(None, "--shots", help="N_m for --sweep records"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Shot-noise seed for --sweep"),
    json_output: bool = typer.Option(False, "--json", "-j", help="Output as JSON"),
):
    """Accuracy, regression and error-histogram metrics of a trained model."""
    if dataset_path is None and not sweep:
        raise typer.BadParameter("give --dataset or --sweep")
    cfg = get_config()
    results = {}
    with handle_errors():
        net, model = load_model(model_path)
        if dataset_path is not None:
            dataset = read_dataset(dataset_path)
            if dataset.plan.n_points != model.n_points:
                raise FormatError("dataset and model disagree on the number of instants")
            if split == "all":
                mask = np.ones(len(dataset), dtype=bool)
            else:
                try:
                    mask = dataset.mask(Split(split))
                except ValueError:
                    raise typer.BadParameter(f"unknown split {split!r}")
            results[split] = evaluate(net, dataset.inputs[mask], dataset.targets[mask])

        if sweep:
            sensor = cfg.sensor_config()
            n_shots = cfg.acquisition.n_shots if shots is None else shots
            streams = StreamFactory(cfg.run.seed if seed is None else seed)
            times = np.linspace(model.window_s[0], model.window_s[1], model.n_points)
            targets = sweep_targets()
            traces = ForwardModel(sensor, times, integration_step(cfg), workers(cfg)).traces(
                targets
            )
            records = np.stack(
                [
                    sample_shots(ResponseTrace(times, trace), n_shots, streams.shots(i, 0)).p
                    for i, trace in enumerate(traces)
                ]
            )
            truth = np.array([[t.rabi, t.detuning] for t in targets])
            results["sweep"] = evaluate_outputs(forward(net, records), truth, net.ranges)

    if json_output:
        print_json(results)
    else:
        for name, metrics in results.items():
            print_metrics(metrics, title=f"Metrics ({name})")


# =============================================================================
# Precision analysis
# =============================================================================


@app.command()
def qfi(
    omega: float = typer.Option(..., "--omega", help="Omega_tg/2pi in kHz"),
    xi: float = typer.Option(0.0, "--xi", help="xi/2pi in kHz"),
    t0_ms: float = typer.Option(T0 * 1e3, "--t0", help="Evaluation time (ms)"),
    parameter: str = typer.Option("both", "--parameter", "-p", help="omega, xi or both"),
    fd_step: Optional[float] = typer.Option(None, "--fd-step", help="Finite-difference step (kHz)"),
    points: int = typer.Option(101, "--points", "-n", help="N_p behind N_T"),
    shots: int = typer.Option(100, "--shots", help="N_m behind N_T"),
    strict: bool = typer.Option(False, "--strict", help="Exit 3 when not converged"),
    json_output: bool = typer.Option(False, "--json", "-j", help="Output as JSON"),
):
    """Quantum Fisher information of the evolved state and the precision bound."""
    if parameter not in ("omega", "xi", "both"):
        raise typer.BadParameter(f"--parameter must be omega, xi or both, got {parameter!r}")
    cfg = get_config()
    params = ["omega", "xi"] if parameter == "both" else [parameter]
    with handle_errors():
        sensor = cfg.sensor_config()
        tgt = TargetParams.from_khz(omega, xi)
        h = float(khz_to_rad(fd_step)) if fd_step is not None else None
        results = [
            qfi_result(
                sensor, tgt, p, float(ms_to_s(t0_ms)), h, points, shots, integration_step(cfg)
            )
            for p in params
        ]

    if json_output:
        print_json(
            [
                {
                    "parameter": r.parameter,
                    "time_s": r.time,
                    "fisher": r.fisher,
                    "bound_khz": float(rad_to_khz(r.bound)),
                    "n_total": r.n_total,
                    "fd_step": r.fd_step,
                    "relative_change": r.relative_change,
                    "converged": r.converged,
                }
                for r in results
            ]
        )
    else:
        print_qfi(results)
    for r in results:
        if not r.converged:
            fail_validation(f"QFI for {r.parameter} did not converge under step halving", strict)


@app.command()
def bayes(
    record_path: Optional[Path] = typer.Option(None, "--record", help="Record CSV"),
    omega: Optional[float] = typer.Option(None, "--omega", help="Synthesize at Omega_tg (kHz)"),
    xi: float = typer.Option(0.0, "--xi", help="Synthesize at xi (kHz)"),
    shots: Optional[int] = typer.Option(None, "--shots", help="N_m (likelihood width)"),
    noiseless: bool = typer.Option(False, "--noiseless", help="Synthesize without shot noise"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Shot-noise seed"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Posterior CSV"),
    strict: bool = typer.Option(False, "--strict", help="Exit 3 when truncated"),
    json_output: bool = typer.Option(False, "--json", "-j", help="Output as JSON"),
):
    """Grid posterior over (Omega_tg, xi) for one record."""
    if (record_path is None) == (omega is None):
        raise typer.BadParameter("give exactly one of --record or --omega")
    cfg = get_config()
    seed = cfg.run.seed if seed is None else seed
    n_shots = cfg.acquisition.n_shots if shots is None else shots
    with handle_errors():
        sensor = cfg.sensor_config()
        step = integration_step(cfg)
        if record_path is not None:
            record = read_record(record_path, shots)
        else:
            plan = cfg.plan()
            times = plan.times()
            trace = ResponseTrace(
                times, ForwardModel(sensor, times, step).trace(TargetParams.from_khz(omega, xi))
            )
            if noiseless:
                record = noiseless_record(trace)
            else:
                record = sample_shots(trace, n_shots, StreamFactory(seed).trial(0))
        posterior = bayes_posterior(
            record,
            sensor,
            cfg.bayes_search(),
            n_shots=record.n_shots or n_shots,
            step=step,
            workers=workers(cfg),
        )
        if out is not None:
            write_posterior(
                out,
                posterior,
                run_meta(cfg, seed=seed, n_shots=record.n_shots or n_shots),
            )

    if json_output:
        print_json(
            {
                "mean_khz": rad_to_khz(posterior.mean),
                "std_khz": rad_to_khz(posterior.std),
                "mode_khz": rad_to_khz(np.array(posterior.mode)),
                "boundary_mass": posterior.boundary_mass,
                "truncated": posterior.truncated,
            }
        )
    else:
        print_posterior(posterior)
        if out is not None:
            console.print(f"Wrote {out}")
    if posterior.truncated:
        fail_validation("posterior mass reaches the grid boundary", strict)


@app.command()
def spread(
    omega: float = typer.Option(..., "--omega", help="Omega_tg/2pi in kHz"),
    xi: float = typer.Option(0.0, "--xi", help="xi/2pi in kHz"),
    model_path: Optional[Path] = typer.Option(None, "--model", help="Use a trained network"),
    trials: int = typer.Option(100, "--trials", help="Independent records"),
    shots: Optional[int] = typer.Option(None, "--shots", help="N_m per record"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Shot-noise seed"),
    lock_window: bool = typer.Option(
        True, "--lock-window/--per-trial-window", help="Reuse the first zoom window"
    ),
    with_qfi: bool = typer.Option(False, "--qfi", help="Report QFI bounds alongside"),
    json_output: bool = typer.Option(False, "--json", "-j", help="Output as JSON"),
):
    """Empirical spread of the network or Bayesian estimator over repeated records."""
    cfg = get_config()
    with handle_errors():
        sensor = cfg.sensor_config()
        step = integration_step(cfg)
        tgt = TargetParams.from_khz(omega, xi)
        base = cfg.plan()
        plan = AcquisitionPlan(
            window=base.window,
            n_points=base.n_points,
            n_shots=base.n_shots if shots is None else shots,
            seed=cfg.run.seed if seed is None else seed,
        )
        if model_path is not None:
            net, model = load_model(model_path)
            plan = AcquisitionPlan(
                window=model.window_s,
                n_points=model.n_points,
                n_shots=plan.n_shots,
                seed=plan.seed,
            )
            estimator = NetworkEstimator(net)
        else:
            estimator = BayesEstimator(
                sensor,
                plan.times(),
                plan.n_shots,
                cfg.bayes_search(),
                lock_window=lock_window,
                step=step,
                workers=workers(cfg),
            )
        stats = estimator_statistics(estimator, sensor, tgt, plan, trials, step=step)
        if with_qfi:
            stats.qfi_bounds = np.array(
                [
                    qfi_result(
                        sensor, tgt, p, plan.window[1], None, plan.n_points, plan.n_shots, step
                    ).bound
                    for p in ("omega", "xi")
                ]
            )

    if json_output:
        print_json(
            {
                "estimator": stats.estimator,
                "n_trials": stats.n_trials,
                "mean_khz": rad_to_khz(stats.mean),
                "std_khz": rad_to_khz(stats.std),
                "qfi_bounds_khz": (
                    rad_to_khz(stats.qfi_bounds) if stats.qfi_bounds is not None else None
                ),
                "seed": plan.seed,
            }
        )
    else:
        print_spread(stats)


def main():
    """Entry point; maps usage errors to exit code 1."""
    try:
        code = app(standalone_mode=False)
    except click.ClickException as e:
        e.show()
        sys.exit(EXIT_ERROR)
    except click.exceptions.Abort:
        sys.exit(EXIT_ERROR)
    sys.exit(code or 0)


if __name__ == "__main__":
    main()

"""Tests for the command-line surface and its exit codes."""

import json
import sys

import pytest
import typer
from typer.testing import CliRunner

from src import cli
from src.cli import app, fail_validation, main
from src.errors import NumericalError
from src.models import RescaleRanges
from src.models.files import TrainingRecord
from src.network import init_network, save_model, to_model_file
from src.output import read_csv
from src.units import T0

runner = CliRunner()


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(
        "[sensor]\nsecular = true\n\n[acquisition]\nstep_fraction = 160\n\n[run]\nseed = 5\n"
    )
    return path


@pytest.fixture
def invoke(config_file):
    def run(*args):
        return runner.invoke(app, ["--config", str(config_file), *args])

    return run


@pytest.fixture
def dataset_path(invoke, tmp_path):
    path = tmp_path / "data.csv"
    result = invoke(
        "gen-dataset",
        str(path),
        "--noiseless",
        "--n-omega", "2",
        "--n-xi", "2",
        "--points", "5",
        "--window", "0.5", "0.6",
    )
    assert result.exit_code == 0, result.output
    return path


def model_file(tmp_path, n_points, window_t0=(0.5, 0.6), training=None):
    net = init_network(3, [n_points, 4, 2], ranges=RescaleRanges.global_ranges())
    window = (window_t0[0] * T0, window_t0[1] * T0)
    model = to_model_file(net, window, n_points, training=training)
    return save_model(tmp_path / f"model{n_points}.json", model)


class TestSimulate:
    def test_writes_record(self, invoke, tmp_path):
        out = tmp_path / "rec.csv"
        result = invoke(
            "simulate", "--omega", "5", "--window", "0", "0.2", "--points", "11",
            "--shots", "100", "--out", str(out),
        )
        assert result.exit_code == 0, result.output
        meta, header, rows = read_csv(out)
        assert header == ["t_s", "p_d", "p_ideal", "p_shot"]
        assert len(rows) == 11
        assert meta["n_shots"] == "100"
        assert meta["seed"] == "5"
        assert float(rows[0][1]) == pytest.approx(1.0)

    def test_detuned_has_no_ideal_column(self, invoke):
        result = invoke(
            "simulate", "--omega", "5", "--xi", "0.1", "--window", "0", "0.1",
            "--points", "3", "--json",
        )
        assert result.exit_code == 0, result.output
        data = json.loads(result.stdout)
        assert set(data) == {"t_s", "p_d"}
        assert len(data["p_d"]) == 3

    def test_null_target_has_no_ideal_column(self, invoke):
        args = ["simulate", "--omega", "0", "--window", "0", "0.1", "--points", "5", "--json"]
        result = invoke(*args)
        assert result.exit_code == 0, result.output
        data = json.loads(result.stdout)
        assert set(data) == {"t_s", "p_d"}
        assert min(data["p_d"]) >= 0.99

    def test_step_fraction_option(self, invoke):
        args = ["simulate", "--omega", "5", "--window", "0", "0.1", "--points", "3", "--json"]
        coarse = json.loads(invoke(*args).stdout)
        fine = json.loads(invoke(*args, "--step-fraction", "320").stdout)
        assert fine["p_d"] == pytest.approx(coarse["p_d"], abs=1e-6)
        assert invoke(*args, "--step-fraction", "10").exit_code == 1

    def test_physics_error_exits_1(self, invoke):
        result = invoke("simulate", "--omega=-1", "--points", "3")
        assert result.exit_code == 1

    def test_numerical_error_exits_2(self, invoke, monkeypatch):
        def fail(*args, **kwargs):
            raise NumericalError("norm drift")

        monkeypatch.setattr(cli, "integrate_response", fail)
        result = invoke("simulate", "--omega", "5", "--points", "3")
        assert result.exit_code == 2


class TestDataset:
    def test_refuses_overwrite(self, invoke, dataset_path):
        args = ["gen-dataset", str(dataset_path), "--noiseless", "--n-omega", "2", "--n-xi", "2",
                "--points", "5", "--window", "0.5", "0.6"]
        assert invoke(*args).exit_code == 1
        assert invoke(*args, "--force").exit_code == 0

    def test_sidecar_written(self, dataset_path):
        sidecar = dataset_path.with_suffix(".meta.json")
        assert sidecar.exists()


class TestTrain:
    def test_restarts(self, invoke, dataset_path, tmp_path):
        out_dir = tmp_path / "runs"
        result = invoke(
            "train", str(dataset_path), "--out-dir", str(out_dir), "--optimizer", "gd",
            "--max-epochs", "2", "--seeds", "1,2", "--json",
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.stdout)
        assert [run["seed"] for run in payload["runs"]] == [1, 2]
        assert all(run["stop_reason"] == "max_epochs" for run in payload["runs"])
        assert (out_dir / "model_seed1.json").exists()
        assert (out_dir / "report_seed2.csv").exists()
        _, header, rows = read_csv(out_dir / "restarts.csv")
        assert header == ["seed", "test_cost"]
        assert len(rows) == 2

    def test_sequential_runs_are_bit_identical(self, config_file, dataset_path, tmp_path):
        models = []
        for name in ("first", "second"):
            out_dir = tmp_path / name
            result = runner.invoke(
                app,
                ["--config", str(config_file), "--sequential", "train", str(dataset_path),
                 "--out-dir", str(out_dir), "--optimizer", "lm", "--max-epochs", "3",
                 "--seeds", "4"],
            )
            assert result.exit_code == 0, result.output
            models.append((out_dir / "model_seed4.json").read_bytes())
        assert models[0] == models[1]

    def test_bad_optimizer(self, invoke, dataset_path):
        result = invoke("train", str(dataset_path), "--optimizer", "adam")
        assert result.exit_code != 0


class TestPredict:
    def test_dataset_rows(self, invoke, dataset_path, tmp_path):
        result = invoke("predict", str(model_file(tmp_path, 5)), "--dataset", str(dataset_path))
        assert result.exit_code == 0, result.output
        lines = result.stdout.strip().splitlines()
        assert lines[0] == "omega_hat_khz,xi_hat_khz"
        assert len(lines) == 5

    def test_output_records_model_seeds(self, invoke, dataset_path, tmp_path):
        training = TrainingRecord(
            optimizer="lm", init_seed=3, dataset_seed=5, stop_epoch=10,
            stop_reason="gradient", final_costs={"train": 0.1},
        )
        out = tmp_path / "estimates.csv"
        model = model_file(tmp_path, 5, training=training)
        result = invoke("predict", str(model), "--dataset", str(dataset_path), "--out", str(out))
        assert result.exit_code == 0, result.output
        meta, header, rows = read_csv(out)
        assert meta["init_seed"] == "3"
        assert meta["dataset_seed"] == "5"
        assert header == ["omega_hat_khz", "xi_hat_khz"]
        assert len(rows) == 4

    def test_point_mismatch_exits_1(self, invoke, dataset_path, tmp_path):
        result = invoke("predict", str(model_file(tmp_path, 7)), "--dataset", str(dataset_path))
        assert result.exit_code == 1

    def test_window_mismatch_exits_1(self, invoke, dataset_path, tmp_path):
        model = model_file(tmp_path, 5, window_t0=(0.0, 1.0))
        result = invoke("predict", str(model), "--dataset", str(dataset_path))
        assert result.exit_code == 1

    def test_record_input(self, invoke, tmp_path):
        record = tmp_path / "rec.csv"
        simulated = invoke(
            "simulate", "--omega", "5", "--window", "0.5", "0.6", "--points", "5",
            "--shots", "100", "--out", str(record),
        )
        assert simulated.exit_code == 0, simulated.output
        result = invoke("predict", str(model_file(tmp_path, 5)), "--record", str(record))
        assert result.exit_code == 0, result.output
        assert len(result.stdout.strip().splitlines()) == 2

    def test_needs_one_source(self, invoke, tmp_path):
        result = invoke("predict", str(model_file(tmp_path, 5)))
        assert result.exit_code != 0


class TestQfi:
    def test_json(self, invoke):
        result = invoke("qfi", "--omega", "5", "--t0", "0.1", "--parameter", "omega", "--json")
        assert result.exit_code == 0, result.output
        (entry,) = json.loads(result.stdout)
        assert entry["parameter"] == "omega"
        assert entry["fisher"] > 0
        assert entry["n_total"] == 10100

    def test_bad_parameter(self, invoke):
        result = invoke("qfi", "--omega", "5", "--parameter", "phase")
        assert result.exit_code != 0


class TestExitCodes:
    def test_strict_validation(self):
        with pytest.raises(typer.Exit) as exc:
            fail_validation("not converged", strict=True)
        assert exc.value.exit_code == 3

    def test_lenient_validation(self):
        fail_validation("not converged", strict=False)

    def test_bad_config(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text("[sensor]\nbogus = 1\n")
        result = runner.invoke(app, ["--config", str(path), "simulate", "--omega", "5"])
        assert result.exit_code == 1

    def test_usage_error(self, monkeypatch):
        monkeypatch.setattr(sys, "argv", ["qsense", "simulate"])
        with pytest.raises(SystemExit) as exc:
            main()
        assert exc.value.code == 1

"""Tests for RK4 integration and the forward model."""

import numpy as np
import pytest

from src.errors import PhysicsInputError
from src.models import Level, TargetParams
from src.physics import (
    ForwardModel,
    default_step,
    final_state,
    ideal_response,
    integrate_response,
    integrate_states,
    max_step,
    simulate_traces,
)
from src.physics.integrator import MAX_HORIZON, RungeKutta4
from src.units import T0, khz_to_rad


class TestNorm:
    def test_norm_preserved(self, secular_cfg, secular_step):
        times = np.linspace(0.0, T0, 11)
        trace = integrate_response(
            secular_cfg, TargetParams.from_khz(10.0, 0.2), times, secular_step
        )
        np.testing.assert_allclose(trace.norms, 1.0, atol=1e-9)

    def test_starts_dark(self, secular_cfg):
        state = final_state(secular_cfg, TargetParams.from_khz(5.0), 0.0)
        assert state.population(Level.DARK) == pytest.approx(1.0)
        assert state.norm == pytest.approx(1.0)

    def test_probabilities_in_unit_interval(self, secular_cfg):
        trace = integrate_response(
            secular_cfg, TargetParams.from_khz(20.0, -0.3), np.linspace(0, 0.5 * T0, 21)
        )
        assert np.all((trace.p_d >= 0) & (trace.p_d <= 1))

    def test_rejects_unnormalised_initial_state(self, secular_cfg, weak_target):
        with pytest.raises(PhysicsInputError):
            RungeKutta4(secular_cfg).propagate([weak_target], [1e-5], initial=np.ones(4))


class TestAccuracy:
    def test_step_halving(self, secular_cfg, secular_step):
        times = np.linspace(0.0, 0.2 * T0, 5)
        tgt = TargetParams.from_khz(15.0, 0.1)
        coarse = integrate_states(secular_cfg, [tgt], times, secular_step)
        fine = integrate_states(secular_cfg, [tgt], times, secular_step / 2)
        np.testing.assert_allclose(coarse, fine, atol=1e-5)

    def test_harmonic_regime(self, secular_cfg, weak_target):
        times = np.linspace(0.0, T0, 41)
        trace = integrate_response(secular_cfg, weak_target, times)
        np.testing.assert_allclose(trace.p_d, ideal_response(weak_target, times), atol=0.02)

    def test_batch_matches_single(self, secular_cfg):
        times = np.linspace(0.0, 0.1 * T0, 3)
        targets = [TargetParams.from_khz(3.0, 0.05), TargetParams.from_khz(18.0, -0.1)]
        batch = integrate_states(secular_cfg, targets, times)
        for i, tgt in enumerate(targets):
            single = integrate_states(secular_cfg, [tgt], times)[0]
            np.testing.assert_allclose(batch[i], single, atol=1e-12)


class TestInputChecks:
    def test_unsorted_times(self, secular_cfg, weak_target):
        with pytest.raises(PhysicsInputError):
            integrate_states(secular_cfg, [weak_target], [1e-4, 5e-5])

    def test_coarse_step(self, secular_cfg, weak_target):
        with pytest.raises(PhysicsInputError):
            integrate_states(secular_cfg, [weak_target], [1e-4], 2.0 * max_step(secular_cfg))

    def test_beyond_horizon(self, secular_cfg, weak_target):
        with pytest.raises(PhysicsInputError):
            integrate_states(secular_cfg, [weak_target], [1.01 * MAX_HORIZON])

    def test_too_few_points_per_period(self, secular_cfg):
        with pytest.raises(PhysicsInputError):
            default_step(secular_cfg, points_per_period=10)


class TestForwardModel:
    def test_memoizes(self, secular_cfg):
        times = np.linspace(0.0, 0.1 * T0, 4)
        model = ForwardModel(secular_cfg, times)
        tgt = TargetParams.from_khz(4.0, 0.0)
        first = model.trace(tgt)
        second = model.traces([tgt, tgt])
        assert len(model) == 1
        np.testing.assert_array_equal(second[0], first)

    def test_disk_cache_round_trip(self, secular_cfg, tmp_path):
        times = np.linspace(0.0, 0.1 * T0, 4)
        tgt = TargetParams.from_khz(6.0, 0.1)
        model = ForwardModel(secular_cfg, times, cache_dir=tmp_path)
        expected = model.trace(tgt)
        assert model.save() is not None

        reloaded = ForwardModel(secular_cfg, times, cache_dir=tmp_path)
        assert len(reloaded) == 1
        np.testing.assert_array_equal(reloaded.trace(tgt), expected)

    def test_workers_do_not_change_results(self, secular_cfg):
        times = np.linspace(0.0, 0.05 * T0, 3)
        targets = [TargetParams.from_khz(o, 0.0) for o in (2.0, 9.0, 16.0)]
        serial = simulate_traces(secular_cfg, targets, times, workers=1)
        parallel = simulate_traces(secular_cfg, targets, times, workers=2)
        np.testing.assert_allclose(parallel, serial, atol=1e-14)


class TestFullHamiltonian:
    """Every term of H kept, on short windows."""

    def test_norm_at_default_step(self, full_cfg):
        times = np.linspace(0.0, 0.05 * T0, 6)
        targets = [TargetParams.from_khz(14.0, 0.3), TargetParams.from_khz(1.0, 0.0)]
        states = integrate_states(full_cfg, targets, times)
        norms = np.sum(np.abs(states) ** 2, axis=-1)
        assert np.max(np.abs(norms - 1.0)) < 1e-9

    def test_step_halving(self, full_cfg):
        times = np.linspace(0.0, 0.05 * T0, 4)
        tgt = TargetParams.from_khz(14.0, 0.3)
        step = default_step(full_cfg)
        coarse = integrate_response(full_cfg, tgt, times, step)
        fine = integrate_response(full_cfg, tgt, times, step / 2)
        assert np.max(np.abs(coarse.p_d - fine.p_d)) < 1e-4

    def test_null_target_stays_dark(self, full_cfg):
        tgt = TargetParams(0.0, float(khz_to_rad(0.3)))
        trace = integrate_response(full_cfg, tgt, np.linspace(0.0, 0.05 * T0, 11))
        assert np.all(trace.p_d >= 0.99)

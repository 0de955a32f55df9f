"""Tests for shot noise, grids, splits, rescaling and dataset generation."""

import logging

import numpy as np
import pytest
from scipy import stats

from src.acquisition import (
    OMEGA_THRESHOLDS_KHZ,
    StreamFactory,
    assign_splits,
    build_grid,
    sweep_targets,
    filter_omega,
    generate_dataset,
    max_separation,
    noiseless_record,
    out_of_range,
    rescale_targets,
    sample_probabilities,
    sample_shots,
    shot_level,
    split_counts,
    unscale_outputs,
)
from src.errors import PhysicsInputError
from src.models import (
    AcquisitionPlan,
    GridSpec,
    RescaleRanges,
    ResponseTrace,
    Split,
    TargetParams,
)
from src.units import T0, khz_to_rad, rad_to_khz


class TestShots:
    def test_binomial_moments(self, rng):
        p = sample_probabilities(np.full(10_000, 0.5), 100, rng)
        assert abs(p.mean() - 0.5) < 3 * np.sqrt(0.25 / 100) / np.sqrt(10_000)
        assert p.var() == pytest.approx(0.25 / 100, rel=0.1)

    @pytest.mark.parametrize("p", [0.3, 0.85])
    def test_binomial_distribution(self, rng, p):
        n_shots, n_draws = 20, 10_000
        draws = sample_probabilities(np.full(n_draws, p), n_shots, rng)
        k = np.arange(n_shots + 1)
        observed = np.bincount(np.rint(draws * n_shots).astype(int), minlength=n_shots + 1)
        expected = stats.binom.pmf(k, n_shots, p) * n_draws

        # fold sparse tails into the outermost bins with expected count >= 5
        kept = np.flatnonzero(expected >= 5)
        lo, hi = kept[0], kept[-1]

        def pool(counts):
            head, tail = counts[: lo + 1].sum(), counts[hi:].sum()
            return np.concatenate([[head], counts[lo + 1 : hi], [tail]])

        _, pvalue = stats.chisquare(pool(observed), pool(expected))
        assert pvalue > 1e-3

    def test_values_are_shot_fractions(self, rng):
        p = sample_probabilities(np.linspace(0, 1, 50), 7, rng)
        np.testing.assert_allclose(p * 7, np.round(p * 7), atol=1e-12)

    def test_certain_outcomes(self, rng):
        p = sample_probabilities(np.array([0.0, 1.0]), 100, rng)
        np.testing.assert_array_equal(p, [0.0, 1.0])

    def test_rejects_zero_shots(self, rng):
        with pytest.raises(PhysicsInputError):
            sample_probabilities(np.array([0.5]), 0, rng)

    def test_record_keeps_times(self, rng):
        trace = ResponseTrace(np.array([0.0, 1e-3]), np.array([1.0, 0.2]))
        record = sample_shots(trace, 100, rng)
        np.testing.assert_array_equal(record.times, trace.times)
        assert record.n_shots == 100
        assert record.sigma == pytest.approx(0.1)
        assert noiseless_record(trace).n_shots is None


class TestStreams:
    def test_same_key_same_draws(self):
        a = StreamFactory(3).shots(5, 1).random(4)
        b = StreamFactory(3).shots(5, 1).random(4)
        np.testing.assert_array_equal(a, b)

    def test_streams_are_distinct(self):
        streams = StreamFactory(3)
        draws = [
            streams.shots(5, 1).random(4),
            streams.shots(5, 2).random(4),
            streams.shots(6, 1).random(4),
            streams.split().random(4),
            streams.trial(0).random(4),
            StreamFactory(4).shots(5, 1).random(4),
        ]
        for i in range(len(draws)):
            for j in range(i + 1, len(draws)):
                assert not np.array_equal(draws[i], draws[j])


class TestGrid:
    def test_training_grid_closure_and_spacing(self):
        targets = build_grid((1.0, 25.0), 241, (-0.3, 0.3), 51)
        assert len(targets) == 241 * 51
        omega = rad_to_khz(np.array([t.rabi for t in targets[::51]]))
        xi = rad_to_khz(np.array([t.detuning for t in targets[:51]]))
        assert omega[0] == pytest.approx(1.0) and omega[-1] == pytest.approx(25.0)
        assert xi[0] == pytest.approx(-0.3) and xi[-1] == pytest.approx(0.3)
        np.testing.assert_allclose(np.diff(omega), 0.1, rtol=1e-9)
        np.testing.assert_allclose(np.diff(xi), 0.012, rtol=1e-9)

    def test_omega_varies_slowest(self):
        targets = build_grid((1.0, 2.0), 2, (0.0, 0.1), 3)
        assert [t.rabi for t in targets[:3]] == [targets[0].rabi] * 3
        assert targets[3].rabi > targets[0].rabi

    def test_single_node(self):
        targets = build_grid((5.0, 5.0), 1, (0.1, 0.1), 1)
        assert targets == [TargetParams.from_khz(5.0, 0.1)]

    def test_reversed_range(self):
        with pytest.raises(PhysicsInputError):
            build_grid((25.0, 1.0), 10, (-0.3, 0.3), 3)

    @pytest.mark.parametrize("threshold,expected", [(3.4, 217), (8.2, 169), (22.6, 25)])
    def test_filter_omega(self, threshold, expected):
        targets = build_grid((1.0, 25.0), 241, (0.0, 0.0), 1)
        assert threshold in OMEGA_THRESHOLDS_KHZ
        assert len(filter_omega(targets, threshold)) == expected

    def test_sweep_targets(self):
        targets = sweep_targets()
        assert len(targets) == 38
        omega = rad_to_khz(np.array([t.rabi for t in targets]))
        assert omega[0] == pytest.approx(9.31)
        assert omega[-1] == pytest.approx(24.25)


class TestSplits:
    @pytest.mark.parametrize("n", [1, 7, 100, 12291])
    def test_counts_partition(self, n):
        n_train, n_val, n_test = split_counts(n)
        assert n_train + n_val + n_test == n
        assert abs(n_train - 0.7 * n) <= 1
        assert abs(n_val - 0.15 * n) <= 1

    def test_assignment(self, rng):
        labels = assign_splits(100, rng)
        assert np.count_nonzero(labels == Split.TRAIN.value) == 70
        assert np.count_nonzero(labels == Split.VALIDATION.value) == 15
        assert np.count_nonzero(labels == Split.TEST.value) == 15

    def test_deterministic(self):
        a = assign_splits(50, StreamFactory(1).split())
        b = assign_splits(50, StreamFactory(1).split())
        np.testing.assert_array_equal(a, b)

    def test_groups_stay_together(self, rng):
        groups = np.repeat(np.arange(20), 5)
        labels = assign_splits(groups.size, rng, groups=groups)
        for g in range(20):
            assert len(set(labels[groups == g])) == 1


class TestRescale:
    def test_round_trip(self):
        ranges = RescaleRanges.global_ranges()
        targets = khz_to_rad(np.array([[1.0, -0.3], [25.0, 0.3], [9.31, 0.15]]))
        scaled = rescale_targets(targets, ranges)
        np.testing.assert_allclose(scaled[0], [0.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(scaled[1], [1.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(unscale_outputs(scaled, ranges), targets, rtol=1e-12)

    def test_out_of_range_is_logged_not_clipped(self, caplog):
        ranges = RescaleRanges.global_ranges()
        with caplog.at_level(logging.WARNING):
            scaled = rescale_targets(khz_to_rad(np.array([[30.0, 0.0]])), ranges)
        assert scaled[0, 0] > 1.0
        assert out_of_range(scaled)[0, 0]
        assert "outside" in caplog.text


class TestDataset:
    def test_row_count_and_labels(self, small_dataset):
        assert len(small_dataset) == 3 * 2 * 2
        assert sum(small_dataset.counts().values()) == 12
        assert set(small_dataset.grid_index.tolist()) == set(range(6))
        assert small_dataset.inputs.shape == (12, 11)

    def test_targets_follow_grid(self, small_dataset):
        omega = rad_to_khz(small_dataset.targets[:, 0])
        np.testing.assert_allclose(sorted(set(np.round(omega, 9))), [1.0, 13.0, 25.0])

    def test_noisy_repetitions_differ(self, small_dataset):
        first, second = small_dataset.inputs[0], small_dataset.inputs[1]
        assert small_dataset.grid_index[0] == small_dataset.grid_index[1]
        assert not np.array_equal(first, second)

    def test_example_view(self, small_dataset):
        example = small_dataset.example(0)
        assert example.repetition == 0
        np.testing.assert_allclose(example.rescaled, small_dataset.rescaled_targets[0])

    def test_reproducible(self, secular_cfg):
        grid = GridSpec((4.0, 6.0), 2, (0.0, 0.1), 1)
        plan = AcquisitionPlan.in_t0(0.5, 0.6, n_points=5, n_shots=50, repetitions=2, seed=3)
        a = generate_dataset(secular_cfg, grid, plan, noiseless=False)
        b = generate_dataset(secular_cfg, grid, plan, noiseless=False)
        np.testing.assert_array_equal(a.inputs, b.inputs)
        np.testing.assert_array_equal(a.splits, b.splits)

    def test_noiseless_repetitions_identical(self, secular_cfg):
        grid = GridSpec((4.0, 4.0), 1, (0.0, 0.0), 1)
        plan = AcquisitionPlan.in_t0(0.5, 0.6, n_points=5, repetitions=3)
        data = generate_dataset(secular_cfg, grid, plan, noiseless=True)
        np.testing.assert_array_equal(data.inputs[0], data.inputs[2])

    def test_omega_threshold_keeps_global_ranges(self, secular_cfg):
        grid = GridSpec((1.0, 25.0), 3, (0.0, 0.0), 1)
        plan = AcquisitionPlan.in_t0(0.5, 0.6, n_points=5)
        data = generate_dataset(secular_cfg, grid, plan, noiseless=True, omega_min_khz=13.0)
        assert len(data) == 2
        assert data.ranges == RescaleRanges.global_ranges()

    def test_split_by_target(self, secular_cfg):
        grid = GridSpec((4.0, 8.0), 4, (0.0, 0.1), 2)
        plan = AcquisitionPlan.in_t0(0.5, 0.6, n_points=5, repetitions=3)
        data = generate_dataset(secular_cfg, grid, plan, noiseless=False, split_by_target=True)
        for node in range(8):
            assert len(set(data.splits[data.grid_index == node])) == 1

    def test_window_beyond_horizon(self, secular_cfg):
        plan = AcquisitionPlan.in_t0(20.5, 21.0, n_points=5)
        with pytest.raises(PhysicsInputError):
            generate_dataset(secular_cfg, GridSpec((1.0, 2.0), 2, (0.0, 0.0), 1), plan, True)


class TestSeparability:
    def test_shot_level(self):
        assert shot_level(100) == pytest.approx(0.1)

    def test_identical_targets_not_separable(self, secular_cfg):
        tgt = TargetParams.from_khz(1.0, 0.06)
        result = max_separation(secular_cfg, tgt, tgt, (0.5 * T0, T0), n_points=5)
        assert result.max_separation == pytest.approx(0.0, abs=1e-12)
        assert not result.separable

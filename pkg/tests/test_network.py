"""Tests for the feed-forward regressor."""

import numpy as np
import pytest

from src.errors import PhysicsInputError
from src.models import LAYER_SIZES, NetworkParams
from src.network import (
    cost,
    flatten,
    forward,
    gradient,
    init_network,
    jacobian,
    normal_equations,
    unflatten,
)


def zero_network(sizes):
    weights = tuple(np.zeros((o, i)) for i, o in zip(sizes[:-1], sizes[1:]))
    biases = tuple(np.zeros(o) for o in sizes[1:])
    activations = tuple(["tanh"] * (len(sizes) - 2) + ["linear"])
    return NetworkParams(weights, biases, activations)


def numeric_gradient(fn, theta, h=1e-6):
    out = np.empty_like(theta)
    for k in range(theta.size):
        step = np.zeros_like(theta)
        step[k] = h
        out[k] = (fn(theta + step) - fn(theta - step)) / (2 * h)
    return out


@pytest.fixture
def small_net():
    return init_network(42, [4, 3, 2, 2])


@pytest.fixture
def batch(rng):
    return rng.uniform(0, 1, (6, 4)), rng.uniform(0, 1, (6, 2))


class TestForward:
    def test_zero_network(self):
        net = zero_network(list(LAYER_SIZES))
        np.testing.assert_array_equal(forward(net, np.full(101, 0.3)), [0.0, 0.0])

    def test_output_bias_passes_through(self):
        net = zero_network([3, 2, 2])
        biases = (net.biases[0], np.array([0.25, -0.5]))
        net = NetworkParams(net.weights, biases, net.activations)
        np.testing.assert_allclose(forward(net, np.ones((4, 3))), [[0.25, -0.5]] * 4)

    def test_single_neuron(self):
        net = NetworkParams(
            weights=(np.array([[0.5, -1.0]]), np.array([[2.0]])),
            biases=(np.array([0.1]), np.array([-0.3])),
            activations=("tanh", "linear"),
        )
        x = np.array([0.4, 0.2])
        expected = 2.0 * np.tanh(0.5 * 0.4 - 1.0 * 0.2 + 0.1) - 0.3
        assert forward(net, x)[0] == pytest.approx(expected)

    def test_wrong_input_size(self, small_net):
        with pytest.raises(PhysicsInputError):
            forward(small_net, np.zeros(5))


class TestCost:
    def test_perfect_prediction(self, small_net, batch):
        X, _ = batch
        assert cost(small_net, X, forward(small_net, X)) == 0.0

    def test_known_value(self):
        net = zero_network([2, 2])
        X = np.zeros((2, 2))
        A = np.array([[1.0, 0.0], [0.0, 2.0]])
        assert cost(net, X, A) == pytest.approx((1.0 + 4.0) / (2 * 2))

    def test_empty_split(self, small_net):
        with pytest.raises(PhysicsInputError):
            cost(small_net, np.empty((0, 4)), np.empty((0, 2)))


class TestGradient:
    def test_matches_finite_differences(self, small_net, batch):
        X, A = batch
        theta = flatten(small_net)
        numeric = numeric_gradient(lambda t: cost(unflatten(small_net, t), X, A), theta)
        np.testing.assert_allclose(gradient(small_net, X, A), numeric, atol=1e-8)

    def test_output_bias_gradient(self, small_net, batch):
        X, A = batch
        residual = forward(small_net, X) - A
        expected = 2.0 * residual.sum(axis=0) / (2 * X.shape[0])
        np.testing.assert_allclose(gradient(small_net, X, A)[-2:], expected, rtol=1e-12)

    def test_jacobian_matches_finite_differences(self, small_net, batch):
        X, _ = batch
        theta = flatten(small_net)
        def output(t, r):
            return forward(unflatten(small_net, t), X).ravel()[r]

        numeric = np.stack(
            [numeric_gradient(lambda t, r=r: output(t, r), theta) for r in range(X.shape[0] * 2)]
        )
        np.testing.assert_allclose(jacobian(small_net, X), numeric, atol=1e-8)

    def test_normal_equations_chunking(self, small_net, batch):
        X, A = batch
        full = normal_equations(small_net, X, A, chunk=100)
        chunked = normal_equations(small_net, X, A, chunk=2)
        np.testing.assert_allclose(chunked[0], full[0], rtol=1e-12, atol=1e-14)
        np.testing.assert_allclose(chunked[1], full[1], rtol=1e-12, atol=1e-14)

    def test_normal_equations_relation_to_gradient(self, small_net, batch):
        X, A = batch
        _, jte = normal_equations(small_net, X, A)
        np.testing.assert_allclose(-2.0 * jte / (2 * X.shape[0]), gradient(small_net, X, A))


class TestInit:
    def test_bounds_and_zero_biases(self):
        net = init_network(7)
        assert net.layer_sizes == list(LAYER_SIZES)
        for w in net.weights:
            assert np.all(np.abs(w) <= 1.0 / np.sqrt(w.shape[1]))
        for b in net.biases:
            assert np.all(b == 0)
        assert net.activations[-1] == "linear"
        assert set(net.activations[:-1]) == {"tanh"}

    def test_seeded(self):
        a, b, c = init_network(1), init_network(1), init_network(2)
        np.testing.assert_array_equal(flatten(a), flatten(b))
        assert not np.array_equal(flatten(a), flatten(c))

    def test_flatten_round_trip(self, small_net):
        theta = flatten(small_net)
        assert theta.size == small_net.n_params
        np.testing.assert_array_equal(flatten(unflatten(small_net, theta)), theta)

    def test_invalid_sizes(self):
        with pytest.raises(PhysicsInputError):
            init_network(0, [4])


class TestGradientFullChain:
    @pytest.mark.parametrize("seed", range(5))
    def test_backprop_matches_finite_differences(self, seed):
        net = init_network(seed)
        rng = np.random.default_rng(seed + 100)
        X = rng.uniform(0, 1, (8, LAYER_SIZES[0]))
        A = rng.uniform(0, 1, (8, LAYER_SIZES[-1]))
        theta = flatten(net)
        analytic = gradient(net, X, A)

        h = 1e-6
        for k in rng.choice(theta.size, size=50, replace=False):
            step = np.zeros_like(theta)
            step[k] = h
            upper = cost(unflatten(net, theta + step), X, A)
            lower = cost(unflatten(net, theta - step), X, A)
            numeric = (upper - lower) / (2 * h)
            # absolute floor of 1e-9 for coordinates with a near-zero gradient
            assert abs(analytic[k] - numeric) <= 1e-5 * max(abs(numeric), 1e-4), k

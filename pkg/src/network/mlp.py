"""Fully connected regressor: forward pass, cost, backpropagation and Jacobian.

Examples are rows: X has shape (N, n_in) and outputs have shape (N, n_out).
The cost is the mean square error over examples and outputs,

    C = sum_j sum_i (y_i^j - a_i^j)^2 / (n_out N)

Flattened parameters list, for each layer in order, W (row-major) then b.
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import Optional

import numpy as np

from ..errors import PhysicsInputError
from ..models.acquisition import RescaleRanges
from ..models.network import LAYER_SIZES, Activation, NetworkParams


def activate(kind: Activation, z: np.ndarray) -> np.ndarray:
    if kind == "tanh":
        return np.tanh(z)
    return z


def activation_slope(kind: Activation, out: np.ndarray) -> np.ndarray:
    """Derivative of the activation expressed through its output."""
    if kind == "tanh":
        return 1.0 - out**2
    return np.ones_like(out)


def init_network(
    seed: int,
    layer_sizes: Sequence[int] = LAYER_SIZES,
    ranges: Optional[RescaleRanges] = None,
    hidden: Activation = "tanh",
) -> NetworkParams:
    """Weights uniform in +-1/sqrt(fan_in), zero biases, linear output layer."""
    if len(layer_sizes) < 2 or min(layer_sizes) < 1:
        raise PhysicsInputError(f"invalid layer sizes {list(layer_sizes)}")
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for n_in, n_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        bound = 1.0 / np.sqrt(n_in)
        weights.append(rng.uniform(-bound, bound, size=(n_out, n_in)))
        biases.append(np.zeros(n_out))
    n_layers = len(weights)
    activations = tuple([hidden] * (n_layers - 1) + ["linear"])
    return NetworkParams(
        weights=tuple(weights),
        biases=tuple(biases),
        activations=activations,
        ranges=ranges,
        init_seed=seed,
    )


def _as_batch(net: NetworkParams, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != net.n_inputs:
        raise PhysicsInputError(
            f"network expects {net.n_inputs} inputs per example, got shape {X.shape}"
        )
    return X


def _layer_outputs(net: NetworkParams, X: np.ndarray) -> list[np.ndarray]:
    """[X, a_1, ..., a_L] for a batch."""
    outs = [X]
    for w, b, kind in zip(net.weights, net.biases, net.activations):
        outs.append(activate(kind, outs[-1] @ w.T + b))
    return outs


def forward(net: NetworkParams, X: np.ndarray) -> np.ndarray:
    """Network outputs; (n_out,) for one example, (N, n_out) for a batch."""
    single = np.asarray(X).ndim == 1
    out = _layer_outputs(net, _as_batch(net, X))[-1]
    return out[0] if single else out


def _check_targets(X: np.ndarray, A: np.ndarray, n_out: int) -> np.ndarray:
    A = np.asarray(A, dtype=float).reshape(-1, n_out)
    if X.shape[0] == 0:
        raise PhysicsInputError("cost is undefined on an empty split")
    if A.shape[0] != X.shape[0]:
        raise PhysicsInputError(f"{X.shape[0]} examples but {A.shape[0]} targets")
    return A


def cost(net: NetworkParams, X: np.ndarray, A: np.ndarray) -> float:
    """Mean square error in rescaled units."""
    X = _as_batch(net, X)
    n_out = net.weights[-1].shape[0]
    A = _check_targets(X, A, n_out)
    residual = forward(net, X) - A
    return float(np.sum(residual**2) / (n_out * X.shape[0]))


def flatten(net: NetworkParams) -> np.ndarray:
    return np.concatenate([np.concatenate([w.ravel(), b]) for w, b in zip(net.weights, net.biases)])


def unflatten(net: NetworkParams, theta: np.ndarray) -> NetworkParams:
    """Parameters with the structure of `net` and the values of `theta`."""
    theta = np.asarray(theta, dtype=float)
    if theta.size != net.n_params:
        raise PhysicsInputError(f"expected {net.n_params} parameters, got {theta.size}")
    weights, biases = [], []
    pos = 0
    for w, b in zip(net.weights, net.biases):
        weights.append(theta[pos : pos + w.size].reshape(w.shape).copy())
        pos += w.size
        biases.append(theta[pos : pos + b.size].copy())
        pos += b.size
    return NetworkParams(
        weights=tuple(weights),
        biases=tuple(biases),
        activations=net.activations,
        ranges=net.ranges,
        init_seed=net.init_seed,
    )


def _backward(net: NetworkParams, outs: list[np.ndarray], delta: np.ndarray) -> list[np.ndarray]:
    """Per-example parameter derivatives for an output-layer seed `delta`.

    delta is dL/d(a_L) with shape (N, n_out). Returns, per layer, the pair
    (dW with shape (N, out, in), db with shape (N, out)) flattened to (N, size).
    """
    blocks = []
    for layer in range(len(net.weights) - 1, -1, -1):
        delta = delta * activation_slope(net.activations[layer], outs[layer + 1])
        prev = outs[layer]
        d_w = delta[:, :, None] * prev[:, None, :]
        blocks.append(np.concatenate([d_w.reshape(delta.shape[0], -1), delta], axis=1))
        if layer:
            delta = delta @ net.weights[layer]
    blocks.reverse()
    return blocks


def gradient(net: NetworkParams, X: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Exact dC/dtheta of the mean square error, flattened."""
    X = _as_batch(net, X)
    n_out = net.weights[-1].shape[0]
    A = _check_targets(X, A, n_out)
    outs = _layer_outputs(net, X)
    delta = 2.0 * (outs[-1] - A) / (n_out * X.shape[0])

    grads = []
    for layer in range(len(net.weights) - 1, -1, -1):
        delta = delta * activation_slope(net.activations[layer], outs[layer + 1])
        grads.append(np.concatenate([(delta.T @ outs[layer]).ravel(), delta.sum(axis=0)]))
        if layer:
            delta = delta @ net.weights[layer]
    grads.reverse()
    return np.concatenate(grads)


def jacobian(net: NetworkParams, X: np.ndarray) -> np.ndarray:
    """dy/dtheta with rows ordered (example, output): shape (N * n_out, n_params)."""
    X = _as_batch(net, X)
    outs = _layer_outputs(net, X)
    n, n_out = outs[-1].shape
    rows = np.empty((n, n_out, net.n_params))
    for k in range(n_out):
        seed = np.zeros((n, n_out))
        seed[:, k] = 1.0
        rows[:, k, :] = np.concatenate(_backward(net, outs, seed), axis=1)
    return rows.reshape(n * n_out, net.n_params)


def normal_equations(
    net: NetworkParams,
    X: np.ndarray,
    A: np.ndarray,
    chunk: int = 512,
) -> tuple[np.ndarray, np.ndarray]:
    """(J^T J, J^T e) with e = A - y, accumulated over example chunks in order."""
    X = _as_batch(net, X)
    n_out = net.weights[-1].shape[0]
    A = _check_targets(X, A, n_out)
    jtj = np.zeros((net.n_params, net.n_params))
    jte = np.zeros(net.n_params)
    for start in range(0, X.shape[0], chunk):
        xs = X[start : start + chunk]
        jac = jacobian(net, xs)
        residual = (A[start : start + chunk] - forward(net, xs)).ravel()
        jtj += jac.T @ jac
        jte += jac.T @ residual
    return jtj, jte

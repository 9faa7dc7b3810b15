"""Shared oracles: finite differences and whole-network gradient checks."""

import numpy as np
import pytest

from snakelab import Activation, InitScheme, Mlp, MlpConfig, TrainConfig
from snakelab.experiments import SyntheticTask, fit_task
from snakelab.network import Adam


def central_diff(f, x, h=1e-5):
    """Central finite difference of a scalar function at x."""
    return (f(x + h) - f(x - h)) / (2.0 * h)


def rel_err(a, b, floor=1e-4):
    """Relative disagreement; entries below `floor` compare absolutely
    against it (finite differences carry ~1e-10 truncation noise, which
    would otherwise dominate near-zero gradients)."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.abs(a - b) / np.maximum(floor, np.maximum(np.abs(a), np.abs(b)))


def batch_mse(net, X, Y) -> float:
    d = net.forward(X) - Y
    return float(np.mean(d * d))


def numeric_gradients(net, X, Y, h=1e-5):
    """Central finite differences of the batch MSE wrt every parameter.

    Matches the key layout of ``Mlp.loss_and_grads``; the learnable
    frequency is perturbed in log space, like the trained parameter.
    """
    grads = {}
    for li, arrays in (("W", net.weights), ("b", net.biases)):
        for i, arr in enumerate(arrays):
            g = np.zeros_like(arr)
            for idx in np.ndindex(arr.shape):
                orig = arr[idx]
                arr[idx] = orig + h
                up = batch_mse(net, X, Y)
                arr[idx] = orig - h
                down = batch_mse(net, X, Y)
                arr[idx] = orig
                g[idx] = (up - down) / (2 * h)
            grads[f"{li}{i}"] = g
    if net.activation.is_snake and net.activation.learnable_a:
        for i, a in enumerate(net.layer_a):
            la = np.log(a)
            net.layer_a[i] = float(np.exp(la + h))
            up = batch_mse(net, X, Y)
            net.layer_a[i] = float(np.exp(la - h))
            down = batch_mse(net, X, Y)
            net.layer_a[i] = a
            grads[f"log_a{i}"] = np.array([[(up - down) / (2 * h)]])
    return grads


def assert_gradients_match(net, X, Y, tol=1e-5, h=1e-5):
    _, analytic = net.loss_and_grads(X, Y)
    numeric = numeric_gradients(net, X, Y, h=h)
    assert analytic.keys() == numeric.keys()
    for name in analytic:
        worst = rel_err(analytic[name], numeric[name]).max()
        assert worst < tol, f"{name}: worst rel err {worst:.3e} >= {tol}"


@pytest.fixture(scope="session")
def sin_gap_fits():
    """One snake / tanh / relu fit each on the gapped sin task (shared:
    training is the expensive part of several behavioural tests).

    ``tanh_raw`` is the same tanh baseline without input rescaling, the
    pipeline in which its gap interpolation is visibly imperfect.
    """
    task = SyntheticTask("sin", seed=3)
    cfg = TrainConfig(optimizer=Adam(lr=1e-3), steps=1000)
    fits = {}
    for key, kind, a, rescale in (("snake", "snake", 10.0, True),
                                  ("tanh", "tanh", 1.0, True),
                                  ("relu", "relu", 1.0, True),
                                  ("tanh_raw", "tanh", 1.0, False)):
        act = Activation(kind, a=a) if kind == "snake" else Activation(kind)
        fits[key] = fit_task(task, act, width=512, train_cfg=cfg,
                             rescale=rescale, seed=11)
    return task, fits

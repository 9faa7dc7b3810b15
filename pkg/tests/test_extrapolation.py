"""Ray-probe certification of the affine / constant / periodic asymptotics."""

import numpy as np
import pytest

from snakelab import (Activation, Asymptotics, ContractError, InitScheme, Mlp,
                      MlpConfig, classify_asymptotics, extrapolation_mse,
                      probe_ray, random_direction)
from snakelab.extrapolation import DEFAULT_Z_GRID


def random_net(kind, widths, seed, a=1.0):
    """Kaiming weights with uniform biases, so intercepts are exercised."""
    net = Mlp.build(MlpConfig(widths, Activation(kind, a=a),
                              init=InitScheme("kaiming"), seed=seed))
    rng = np.random.default_rng(seed + 1000)
    for b in net.biases:
        b[:] = rng.uniform(-0.5, 0.5, size=b.shape)
    return net


class TestTheoremProbes:
    def test_relu_rays_fit_affine(self):
        net = random_net("relu", (4, 16, 16, 2), seed=0)
        rng = np.random.default_rng(1)
        for _ in range(20):
            report = probe_ray(net, random_direction(4, rng), DEFAULT_Z_GRID)
            assert report.affine_residual < 1e-9

    def test_tanh_rays_level_off(self):
        net = random_net("tanh", (4, 16, 16, 2), seed=0)
        rng = np.random.default_rng(2)
        for _ in range(20):
            report = probe_ray(net, random_direction(4, rng), DEFAULT_Z_GRID)
            assert report.constancy_deviation < 1e-8

    def test_relu_slopes_depend_on_direction(self):
        net = random_net("relu", (1, 12, 1), seed=3)
        plus = probe_ray(net, np.array([1.0]))
        minus = probe_ray(net, np.array([-1.0]))
        assert abs(plus.slope[0] - minus.slope[0]) > 1e-3

    def test_direction_dependence_in_higher_dimension(self):
        net = random_net("relu", (3, 16, 2), seed=4)
        rng = np.random.default_rng(5)
        slopes = [probe_ray(net, random_direction(3, rng)).slope
                  for _ in range(6)]
        gaps = [np.linalg.norm(s1 - s2) for i, s1 in enumerate(slopes)
                for s2 in slopes[i + 1:]]
        assert max(gaps) > 1e-3

    def test_grid_validation(self):
        net = random_net("relu", (2, 4, 1), seed=6)
        u = np.array([1.0, 0.0])
        with pytest.raises(ContractError, match="short"):
            probe_ray(net, u, np.geomspace(1, 100, 5))
        with pytest.raises(ContractError, match="unit"):
            probe_ray(net, 2 * u)
        with pytest.raises(ContractError, match="increasing"):
            probe_ray(net, u, np.linspace(10, 1, 16))


class TestClassification:
    def test_relu_classifies_affine(self):
        net = random_net("relu", (4, 16, 16, 2), seed=0)
        report = probe_ray(net, random_direction(4, np.random.default_rng(7)))
        assert classify_asymptotics(report) is Asymptotics.AFFINE

    def test_tanh_classifies_constant(self):
        net = random_net("tanh", (4, 16, 16, 2), seed=0)
        report = probe_ray(net, random_direction(4, np.random.default_rng(8)))
        assert classify_asymptotics(report) is Asymptotics.CONSTANT

    def test_swish_and_leaky_classify_affine(self):
        for kind in ("swish", "leaky_relu"):
            net = random_net(kind, (4, 16, 16, 2), seed=1)
            rng = np.random.default_rng(9)
            for _ in range(5):
                report = probe_ray(net, random_direction(4, rng))
                assert classify_asymptotics(report) is Asymptotics.AFFINE, kind

    def test_snake_keeps_periodic_residual(self):
        # near-identity first layer, random read-out
        rng = np.random.default_rng(10)
        a = 1.0
        w2 = rng.uniform(-1, 1, (1, 12))
        net = Mlp((1, 12, 1), Activation("snake", a=a),
                  [rng.uniform(0.5, 1.5, (12, 1)), w2],
                  [np.zeros((1, 12)), np.zeros((1, 1))])
        report = probe_ray(net, np.array([1.0]))
        assert classify_asymptotics(report) is Asymptotics.PERIODIC_RESIDUAL
        amplitude = float(np.abs(report.scan_residual).max())
        assert amplitude >= 0.1 / a

    def test_snake_spectral_peak_location(self):
        # one neuron: residual sin(ax)^2/a has frequency a/pi cycles per z
        a = 1.0
        net = Mlp((1, 1, 1), Activation("snake", a=a),
                  [np.array([[1.0]]), np.array([[1.0]])],
                  [np.zeros((1, 1)), np.zeros((1, 1))])
        report = probe_ray(net, np.array([1.0]))
        from snakelab import residual_spectrum
        freqs, mags = residual_spectrum(report)
        peak = freqs[1 + np.argmax(mags[1:])]
        assert abs(peak - a / np.pi) < 2 * (freqs[1] - freqs[0])


class TestExtrapolationMse:
    def test_perfect_oracle_scores_zero(self):
        net = Mlp((1, 1), Activation("relu"), [np.array([[2.0]])],
                  [np.array([[1.0]])])
        mses = extrapolation_mse(net, lambda x: 2 * x + 1)
        assert set(mses) == {"gap", "left_extrapolation", "right_extrapolation"}
        assert all(v < 1e-25 for v in mses.values())

    def test_trained_baselines_on_sin(self, sin_gap_fits):
        task, fits = sin_gap_fits
        tanh_mse = fits["tanh"].range_mse()
        snake_mse = fits["snake"].range_mse()
        assert tanh_mse["right_extrapolation"] >= 0.3
        assert snake_mse["right_extrapolation"] < 0.1
        assert snake_mse["right_extrapolation"] < tanh_mse["right_extrapolation"]
        # against the raw-input tanh pipeline, snake even extrapolates
        # better than tanh interpolates the held-out gap
        assert snake_mse["right_extrapolation"] < fits["tanh_raw"].range_mse()["gap"]

    def test_relu_vs_snake_extrapolation_gap(self, sin_gap_fits):
        task, fits = sin_gap_fits
        relu_mse = fits["relu"].range_mse()
        snake_mse = fits["snake"].range_mse()
        assert relu_mse["right_extrapolation"] >= 2 * snake_mse["right_extrapolation"]
        assert fits["relu"].trace[-1] < 0.05  # trains fine, extrapolates poorly

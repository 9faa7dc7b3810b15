"""Quadrature coefficients and the exact snake realization of partial sums."""

import math

import numpy as np
import pytest

from snakelab import (CapacityError, FourierSpec, bounded_approx_check,
                      build_fourier_net, fourier_coefficients, snake_cos_pair)
from scipy.integrate import simpson


def square_wave(x):
    return np.where(np.sin(x) >= 0, 1.0, -1.0)


class TestCoefficients:
    def test_pure_cosine_is_orthogonal(self):
        L = 2.5
        spec = fourier_coefficients(lambda x: np.cos(np.pi * x / L), L, 4)
        assert abs(spec.alpha[0] - 1.0) <= 1e-10
        assert abs(spec.a0) <= 1e-10
        assert max(abs(v) for v in spec.alpha[1:] + spec.beta) <= 1e-10

    def test_square_wave_classical_series(self):
        # 4/(pi m) on odd sine orders, zero elsewhere
        spec = fourier_coefficients(square_wave, math.pi, 8,
                                    quadrature_points=400_000)
        for m in range(1, 9):
            expect = 4 / (math.pi * m) if m % 2 == 1 else 0.0
            assert abs(spec.beta[m - 1] - expect) <= 1e-6, m
            # the node exactly at the jump (sign(sin 0) := 1) leaves a
            # one-panel asymmetry in the even part
            assert abs(spec.alpha[m - 1]) <= 1e-5

    def test_two_tone_target(self):
        # sin(x) + sin(4x)/4 over one 2*pi period
        f = lambda x: np.sin(x) + np.sin(4 * x) / 4
        spec = fourier_coefficients(f, math.pi, 6)
        assert abs(spec.beta[0] - 1.0) <= 1e-8
        assert abs(spec.beta[3] - 0.25) <= 1e-8
        others = [spec.beta[i] for i in (1, 2, 4, 5)] + list(spec.alpha)
        assert max(abs(v) for v in others) <= 1e-8

    def test_parseval_ratio_band_limited(self):
        rng = np.random.default_rng(3)
        L = 3.0
        spec_in = FourierSpec(L, 5, rng.uniform(-1, 1),
                              tuple(rng.uniform(-1, 1, 5)),
                              tuple(rng.uniform(-1, 1, 5)))
        spec_out = fourier_coefficients(spec_in.partial_sum, L, 5,
                                        quadrature_points=4096)
        energy_coeff = (spec_out.a0 ** 2 / 2 + sum(a * a for a in spec_out.alpha)
                        + sum(b * b for b in spec_out.beta))
        x = np.linspace(-L, L, 4097)
        energy_quad = simpson(spec_in.partial_sum(x) ** 2, x=x) / L
        assert energy_coeff / energy_quad <= 1 + 1e-6

    def test_partial_sum_has_declared_period(self):
        rng = np.random.default_rng(4)
        spec = FourierSpec(1.7, 3, 0.4, tuple(rng.uniform(-1, 1, 3)),
                           tuple(rng.uniform(-1, 1, 3)))
        x = np.linspace(-5, 5, 500)
        # 2L-periodic: the basis is cos/sin(m pi x / L)
        assert np.abs(spec.partial_sum(x + 2 * 1.7) - spec.partial_sum(x)).max() <= 1e-10


class TestCosinePair:
    def test_matches_cosine_on_grid(self):
        pair = snake_cos_pair(2.0, 1.0)
        x = np.linspace(-10, 10, 2001)
        assert np.abs(pair.evaluate(x) - np.cos(2 * x)).max() < 1e-12

    def test_zero_frequency_is_one(self):
        pair = snake_cos_pair(0.0, 0.7)
        x = np.linspace(-5, 5, 101)
        assert np.abs(pair.evaluate(x) - 1.0).max() == 0.0

    def test_at_origin(self):
        for omega, a in ((1.0, 0.5), (3.0, 2.0)):
            assert abs(snake_cos_pair(omega, a).evaluate(np.zeros(1))[0] - 1.0) < 1e-15

    def test_phase_shift_gives_sine(self):
        pair = snake_cos_pair(1.5, 0.8, phase=-math.pi / 2)
        x = np.linspace(-8, 8, 1001)
        assert np.abs(pair.evaluate(x) - np.sin(1.5 * x)).max() < 1e-12


class TestConstructedNets:
    def test_pure_cosine_spec(self):
        L = 2.0
        spec = FourierSpec(L, 1, 0.0, (1.0,), (0.0,))
        net = build_fourier_net(spec, a=1.0)
        x = np.linspace(-3 * L, 3 * L, 4001)
        assert np.abs(net.predict_1d(x) - np.cos(np.pi * x / L)).max() < 1e-12

    def test_zero_spec_is_zero(self):
        spec = FourierSpec(1.0, 3, 0.0, (0.0,) * 3, (0.0,) * 3)
        net = build_fourier_net(spec)
        assert np.abs(net.predict_1d(np.linspace(-9, 9, 500))).max() == 0.0

    def test_random_specs_match_partial_sums(self):
        rng = np.random.default_rng(12)
        for trial in range(12):
            m = int(rng.integers(1, 17))
            L = float(rng.uniform(1, 10))
            a = float(rng.choice([0.5, 1.0, 2.0]))
            spec = FourierSpec(L, m, float(rng.uniform(-1, 1)),
                               tuple(rng.uniform(-1, 1, m)),
                               tuple(rng.uniform(-1, 1, m)))
            net = build_fourier_net(spec, a=a)
            x = np.linspace(-3 * L, 3 * L, 3001)
            assert np.abs(net.predict_1d(x) - spec.partial_sum(x)).max() < 1e-9

    def test_far_extrapolation_is_still_exact(self):
        rng = np.random.default_rng(13)
        L = 4.0
        spec = FourierSpec(L, 8, 0.3, tuple(rng.uniform(-1, 1, 8)),
                           tuple(rng.uniform(-1, 1, 8)))
        net = build_fourier_net(spec, a=2.0)
        x = np.linspace(10 * L, 11 * L, 2001)
        assert np.abs(net.predict_1d(x) - spec.partial_sum(x)).max() < 1e-9

    def test_width_accounting(self):
        spec = FourierSpec(1.0, 6, 0.0, (1.0,) + (0.0,) * 5, (0.0,) * 6)
        assert build_fourier_net(spec).widths[1] == 24
        spec_mean = FourierSpec(1.0, 6, 0.8, (1.0,) + (0.0,) * 5, (0.0,) * 6)
        assert build_fourier_net(spec_mean).widths[1] == 26

    def test_square_wave_order_51(self):
        spec = fourier_coefficients(square_wave, math.pi, 51,
                                    quadrature_points=2 ** 17)
        net = build_fourier_net(spec, a=1.0)
        x = np.linspace(-3 * math.pi, 3 * math.pi, 120_001)
        ps = spec.partial_sum(x)
        assert np.abs(net.predict_1d(x) - ps).max() < 1e-9
        # pointwise convergence away from the jumps (at multiples of pi)
        dist = np.abs(x / math.pi - np.round(x / math.pi)) * math.pi
        far = dist >= 0.1 * math.pi
        assert np.abs(ps - square_wave(x))[far].max() < 0.05


class TestBoundedApproximation:
    def test_parabola(self):
        m = bounded_approx_check(np.square, (-1.0, 1.0), 1e-2)
        assert m <= 64

    def test_constant_needs_order_one(self):
        m = bounded_approx_check(lambda x: np.ones_like(x), (0.0, 2.0), 1e-9)
        assert m == 1

    def test_square_wave_hits_capacity(self):
        with pytest.raises(CapacityError):
            bounded_approx_check(square_wave, (-math.pi, math.pi), 1e-3,
                                 orders=(1, 4, 16, 64, 256))

"""Exact Fourier-series networks built from snake neurons.

A trigonometric partial sum

    S(x) = a0/2 + sum_{m=1..M} [ alpha_m cos(m pi x / L) + beta_m sin(m pi x / L) ]

(2L-periodic; coefficients in the normalized convention with a 1/L factor in
front of the integrals, so the sums converge to the function) can be realized
*exactly* by a one-hidden-layer snake network.  The device is the identity

    a * (snake_a(t) + snake_a(-t)) = 2 sin(a t)^2 = 1 - cos(2 a t),

so a pair of snake neurons with opposite input weights represents one cosine:
with t = (w x + phi) / (2a),

    cos(w x + phi) = 1 - a * [snake_a(t) + snake_a(-t)].

Sine terms are phase-shifted cosines (phi = -pi/2) entering through the
hidden biases.  Each harmonic therefore costs 4 neurons (a cosine pair and a
sine pair); a nonzero mean term costs 2 more, realized by a zero-input-weight
pair whose linear parts cancel.  The equality is algebraic, so it holds on
all of R, not just on a bounded window -- constructed nets extrapolate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .activations import Activation, _check_a
from .errors import CapacityError, ParameterError
from .network import Mlp


@dataclass(frozen=True)
class FourierSpec:
    """Partial-sum description: half period L, order, and coefficients.

    The represented function is 2L-periodic; ``alpha[k]`` and ``beta[k]``
    hold the order-(k+1) cosine and sine coefficients, and the mean term is
    a0/2.
    """

    half_period: float
    order: int
    a0: float
    alpha: tuple[float, ...]
    beta: tuple[float, ...]

    def __post_init__(self):
        if self.half_period <= 0:
            raise ParameterError("half period must be positive")
        if self.order < 1 or len(self.alpha) != self.order or len(self.beta) != self.order:
            raise ParameterError("need exactly `order` alpha and beta coefficients")
        object.__setattr__(self, "alpha", tuple(float(v) for v in self.alpha))
        object.__setattr__(self, "beta", tuple(float(v) for v in self.beta))

    def partial_sum(self, x) -> np.ndarray:
        """Evaluate S(x) directly (the oracle the network is checked against)."""
        x = np.asarray(x, dtype=np.float64)
        out = np.full_like(x, self.a0 / 2.0)
        for m in range(1, self.order + 1):
            w = m * math.pi / self.half_period
            out = out + self.alpha[m - 1] * np.cos(w * x) + self.beta[m - 1] * np.sin(w * x)
        return out


def fourier_coefficients(f, half_period: float, order: int,
                         quadrature_points: int | None = None) -> FourierSpec:
    """Coefficients of f on [-L, L] by composite-Simpson quadrature.

    Uses at least 64 * order points (more if requested); the node count is
    forced even so panel boundaries land on 0 and +-L, which keeps the rule
    accurate for waveforms with jumps at those points.
    """
    L = float(half_period)
    if L <= 0:
        raise ParameterError("half period must be positive")
    n = max(64 * order, quadrature_points or 0)
    n += n % 2
    x = np.linspace(-L, L, n + 1)
    fx = np.asarray(f(x), dtype=np.float64)
    a0 = simpson(fx, x=x) / L
    alpha, beta = [], []
    for m in range(1, order + 1):
        w = m * math.pi / L
        alpha.append(simpson(fx * np.cos(w * x), x=x) / L)
        beta.append(simpson(fx * np.sin(w * x), x=x) / L)
    return FourierSpec(L, order, float(a0), tuple(alpha), tuple(beta))


@dataclass(frozen=True)
class CosinePair:
    """Two snake neurons computing cos(omega x + phase) exactly.

    output(x) = constant + w_out[0] snake_a(w_in[0] x + b_in[0])
                         + w_out[1] snake_a(w_in[1] x + b_in[1])
    """

    w_in: tuple[float, float]
    b_in: tuple[float, float]
    w_out: tuple[float, float]
    constant: float
    a: float

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        act = Activation("snake", a=self.a)
        out = np.full_like(x, self.constant)
        for wi, bi, wo in zip(self.w_in, self.b_in, self.w_out):
            out = out + wo * act.value(wi * x + bi)
        return out


def snake_cos_pair(omega: float, a: float, phase: float = 0.0) -> CosinePair:
    """Weights of the two-neuron snake block equal to cos(omega x + phase).

    Input weights are +-omega/(2a) with biases +-phase/(2a); both output
    weights are -a and the linear parts of the opposite-sign neurons cancel,
    leaving 1 - 2 sin((omega x + phase)/2)^2 = cos(omega x + phase).
    """
    _check_a(a)
    half = 1.0 / (2.0 * a)
    return CosinePair(w_in=(omega * half, -omega * half),
                      b_in=(phase * half, -phase * half),
                      w_out=(-a, -a), constant=1.0, a=a)


def build_fourier_net(spec: FourierSpec, a: float = 1.0) -> Mlp:
    """One-hidden-layer snake net whose forward pass equals the partial sum.

    Hidden width is 4 * order, plus 2 mean-term neurons when a0 != 0.  The
    per-pair constants and the coefficients' contributions to them live in
    the output bias; the mean term a0/2 is carried by a zero-input-weight
    pair so it survives even with the output bias ignored.
    """
    _check_a(a)
    w_in, b_in, w_out = [], [], []
    out_bias = 0.0
    for m in range(1, spec.order + 1):
        omega = m * math.pi / spec.half_period
        for coeff, phase in ((spec.alpha[m - 1], 0.0),
                             (spec.beta[m - 1], -math.pi / 2.0)):
            pair = snake_cos_pair(omega, a, phase)
            w_in.extend(pair.w_in)
            b_in.extend(pair.b_in)
            w_out.extend(coeff * w for w in pair.w_out)
            out_bias += coeff * pair.constant
    if spec.a0 != 0.0:
        # snake_a(b) + snake_a(-b) = 2 sin(a b)^2 / a = 2/a at b = pi/(2a)
        b = math.pi / (2.0 * a)
        w_in.extend([0.0, 0.0])
        b_in.extend([b, -b])
        w_out.extend([a * spec.a0 / 4.0] * 2)

    width = len(w_in)
    W1 = np.array(w_in).reshape(width, 1)
    b1 = np.array(b_in).reshape(1, width)
    W2 = np.array(w_out).reshape(1, width)
    b2 = np.array([[out_bias]])
    return Mlp((1, width, 1), Activation("snake", a=a), [W1, W2], [b1, b2])


def bounded_approx_check(g, interval: tuple[float, float], tol: float,
                         a: float = 1.0, grid_points: int = 10_000,
                         orders: tuple[int, ...] = (1, 2, 4, 8, 16, 32, 64, 128, 256),
                         ) -> int:
    """Smallest tested order whose constructed net is sup-norm tol-close to g.

    The function is treated as one period of a periodic extension of the
    interval.  Raises :class:`CapacityError` when even the largest tested
    order misses the tolerance, which is the expected outcome for targets
    with jump discontinuities (no uniform convergence there).
    """
    lo, hi = float(interval[0]), float(interval[1])
    if hi <= lo:
        raise ParameterError(f"empty interval {interval}")
    mid, L = (lo + hi) / 2.0, (hi - lo) / 2.0
    shifted = lambda u: np.asarray(g(u + mid), dtype=np.float64)
    x = np.linspace(lo, hi, grid_points)
    gx = np.asarray(g(x), dtype=np.float64)
    for m in orders:
        spec = fourier_coefficients(shifted, L, m, quadrature_points=max(64 * m, 4096))
        net = build_fourier_net(spec, a=a)
        err = float(np.abs(net.predict_1d(x - mid) - gx).max())
        if err <= tol:
            return m
    raise CapacityError(f"sup-norm error {err:.3g} > {tol:.3g} at the largest "
                        f"tested order {orders[-1]}")

"""Activation family: Snake, periodic baselines, and standard baselines.

The Snake activation with frequency a > 0 is

    snake(x, a) = x + sin(a x)^2 / a  =  x - cos(2 a x) / (2 a) + 1 / (2 a),

a monotonic function (derivative 1 + sin(2 a x) >= 0) whose bounded periodic
residual has period pi / a.  Larger a biases a network toward higher learned
frequencies.  Under a standard-normal input its variance has the closed form
implemented by :func:`snake_variance`, which peaks at a ~= 0.56045; dividing
post-activations by sigma_a = sqrt(variance) restores unit variance, which is
what the ``corrected`` flag does.

All functions are pure and vectorized over numpy arrays; scalar a throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ContractError, ParameterError

KINDS = ("relu", "leaky_relu", "tanh", "swish", "sin",
         "x_plus_sin", "x_plus_cos", "snake", "snake_learnable")

SNAKE_KINDS = ("snake", "snake_learnable")

# Kinds whose Maclaurin series exists (excludes the piecewise-linear ones).
ANALYTIC_KINDS = ("tanh", "swish", "sin", "x_plus_sin", "x_plus_cos",
                  "snake", "snake_learnable")


def _check_a(a: float) -> float:
    if not a > 0:
        raise ParameterError(f"snake frequency must be positive, got a={a}")
    return float(a)


def snake(x, a: float):
    """x + sin(a x)^2 / a."""
    _check_a(a)
    s = np.sin(a * np.asarray(x, dtype=np.float64))
    return x + s * s / a


def snake_alt(x, a: float):
    """Equivalent closed form x - cos(2 a x)/(2 a) + 1/(2 a)."""
    _check_a(a)
    x = np.asarray(x, dtype=np.float64)
    return x - np.cos(2 * a * x) / (2 * a) + 1 / (2 * a)


def snake_deriv(x, a: float):
    """d/dx snake = 1 + sin(2 a x); nonnegative everywhere."""
    _check_a(a)
    return 1.0 + np.sin(2 * a * np.asarray(x, dtype=np.float64))


def snake_deriv_a(x, a: float):
    """d/da snake = x sin(2 a x)/a - sin(a x)^2 / a^2  (limit x^2 as a -> 0)."""
    _check_a(a)
    x = np.asarray(x, dtype=np.float64)
    s = np.sin(a * x)
    return x * np.sin(2 * a * x) / a - s * s / (a * a)


def snake_variance(a: float) -> float:
    """Variance of snake(x, a) for x ~ N(0, 1).

    Equals 1 + (1 + exp(-8 a^2) - 2 exp(-4 a^2)) / (8 a^2); tends to 1 for
    large a and is maximized near a ~= 0.56045.
    """
    _check_a(a)
    a2 = a * a
    return 1.0 + (1.0 + math.exp(-8 * a2) - 2 * math.exp(-4 * a2)) / (8 * a2)


def snake_variance_deriv(a: float) -> float:
    """d/da of :func:`snake_variance` (used when a is learned under correction)."""
    _check_a(a)
    a2 = a * a
    n = 1.0 + math.exp(-8 * a2) - 2 * math.exp(-4 * a2)
    dn = 16 * a * (math.exp(-4 * a2) - math.exp(-8 * a2))
    return dn / (8 * a2) - n / (4 * a2 * a)


def _sigmoid(x):
    # overflow-safe on both tails; exp only ever sees non-positive args
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


@dataclass(frozen=True)
class Activation:
    """A member of the activation family, with its parameters.

    kind          one of KINDS ('snake_learnable' is snake with learnable_a)
    a             frequency for the snake kinds (initial value when learnable)
    slope         negative-side slope for leaky_relu
    learnable_a   whether a is trained (one scalar per layer, in log space)
    corrected     divide snake outputs by sigma_a to preserve unit variance
    """

    kind: str
    a: float = 1.0
    slope: float = 0.01
    learnable_a: bool = False
    corrected: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown activation kind {self.kind!r}; "
                                 f"expected one of {KINDS}")
        if self.kind == "snake_learnable":
            object.__setattr__(self, "kind", "snake")
            object.__setattr__(self, "learnable_a", True)
        if self.is_snake:
            _check_a(self.a)
        elif self.learnable_a or self.corrected:
            raise ParameterError(
                f"learnable_a/corrected only apply to snake, not {self.kind!r}")

    @classmethod
    def parse(cls, name: str, a: float = 1.0, slope: float = 0.01,
              corrected: bool = False) -> "Activation":
        """Build from a case-insensitive kind name (CLI entry point)."""
        return cls(name.strip().lower(), a=a, slope=slope, corrected=corrected)

    @property
    def is_snake(self) -> bool:
        return self.kind in SNAKE_KINDS

    @property
    def is_analytic(self) -> bool:
        return self.kind in ANALYTIC_KINDS

    def with_corrected(self, corrected: bool = True) -> "Activation":
        return replace(self, corrected=corrected)

    def _a(self, a: float | None) -> float:
        return self.a if a is None else a

    def value(self, x, a: float | None = None):
        x = np.asarray(x, dtype=np.float64)
        k = self.kind
        if k == "relu":
            return np.maximum(x, 0.0)
        if k == "leaky_relu":
            return np.where(x > 0, x, self.slope * x)
        if k == "tanh":
            return np.tanh(x)
        if k == "swish":
            return x * _sigmoid(x)
        if k == "sin":
            return np.sin(x)
        if k == "x_plus_sin":
            return x + np.sin(x)
        if k == "x_plus_cos":
            return x + np.cos(x)
        a = _check_a(self._a(a))
        out = snake(x, a)
        if self.corrected:
            out = out / math.sqrt(snake_variance(a))
        return out

    def grad_x(self, x, a: float | None = None):
        return self.value_and_grad(x, a)[1]

    def value_and_grad(self, x, a: float | None = None):
        """(value, d value/dx), sharing the trig evaluations for snake."""
        x = np.asarray(x, dtype=np.float64)
        k = self.kind
        if k == "relu":
            return np.maximum(x, 0.0), (x > 0).astype(np.float64)
        if k == "leaky_relu":
            pos = x > 0
            return (np.where(pos, x, self.slope * x),
                    np.where(pos, 1.0, self.slope))
        if k == "tanh":
            t = np.tanh(x)
            return t, 1.0 - t * t
        if k == "swish":
            s = _sigmoid(x)
            return x * s, s * (1.0 + x * (1.0 - s))
        if k == "sin":
            return np.sin(x), np.cos(x)
        if k == "x_plus_sin":
            return x + np.sin(x), 1.0 + np.cos(x)
        if k == "x_plus_cos":
            return x + np.cos(x), 1.0 - np.sin(x)
        a = _check_a(self._a(a))
        s, c = np.sin(a * x), np.cos(a * x)
        val = x + s * s / a
        grad = 1.0 + 2.0 * s * c  # = 1 + sin(2 a x)
        if self.corrected:
            sig = math.sqrt(snake_variance(a))
            val, grad = val / sig, grad / sig
        return val, grad

    def grad_a(self, x, a: float | None = None):
        """d value/da for the snake kinds (includes the sigma_a term when
        the variance correction is active)."""
        if not self.is_snake:
            raise ContractError(f"{self.kind!r} has no frequency parameter")
        a = _check_a(self._a(a))
        da = snake_deriv_a(x, a)
        if not self.corrected:
            return da
        var = snake_variance(a)
        sig = math.sqrt(var)
        # d/da [snake/sigma] = snake_a'/sigma - snake * var'/(2 sigma^3)
        return da / sig - snake(x, a) * snake_variance_deriv(a) / (2 * var * sig)


def taylor_coefficients(act: Activation, order: int) -> np.ndarray:
    """Estimate Maclaurin coefficients c_0..c_order of an analytic activation.

    Uses central-difference stencils for the k-th derivative at 0, evaluated
    at shrinking steps with two Richardson extrapolations (h^2 -> h^6 error).
    Good to well under 1e-3 for the kinds in this family up to order ~6.
    """
    if not act.is_analytic:
        raise ContractError(f"{act.kind!r} is not analytic at 0")

    def kth_deriv(k: int, h: float) -> float:
        if k == 0:
            return float(act.value(np.array(0.0)))
        offsets = k / 2.0 - np.arange(k + 1)
        weights = np.array([(-1) ** i * math.comb(k, i) for i in range(k + 1)],
                           dtype=np.float64)
        vals = act.value(offsets * h)
        return float((weights * vals).sum() / h ** k)

    coeffs = np.empty(order + 1)
    for k in range(order + 1):
        h = 0.4
        d0, d1, d2 = (kth_deriv(k, h / 2 ** i) for i in range(3))
        e0 = (4 * d1 - d0) / 3
        e1 = (4 * d2 - d1) / 3
        coeffs[k] = ((16 * e1 - e0) / 15) / math.factorial(k)
    return coeffs

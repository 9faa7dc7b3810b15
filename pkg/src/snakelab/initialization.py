"""Weight initialization schemes and the post-activation variance correction.

Two uniform fan-in schemes are provided.  `kaiming` draws from
Uniform(-sqrt(6/d), sqrt(6/d)) where d is the fan-in; `snake` shrinks that
range by a factor of sqrt(2) to Uniform(-sqrt(3/d), sqrt(3/d)), giving
element variance 1/d, which keeps preactivation variance near one when the
activation is close to the identity.  `snake_corrected` samples identically
to `snake` and additionally turns on the sigma_a division applied to snake
outputs (see :mod:`snakelab.activations`); sigma_a is recomputed from the
current frequency on every forward pass, so it tracks a learned a.

All sampling goes through numpy's seedable PCG64 generator; the same integer
seed always reproduces the same matrix bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .activations import snake_variance
from .errors import ParameterError

INIT_KINDS = ("kaiming", "snake", "snake_corrected")


@dataclass(frozen=True)
class InitScheme:
    kind: str = "snake"

    def __post_init__(self):
        if self.kind not in INIT_KINDS:
            raise ParameterError(f"unknown init scheme {self.kind!r}; "
                                 f"expected one of {INIT_KINDS}")

    @property
    def corrects_variance(self) -> bool:
        return self.kind == "snake_corrected"

    def half_range(self, fan_in: int) -> float:
        if self.kind == "kaiming":
            return math.sqrt(6.0 / fan_in)
        return math.sqrt(3.0 / fan_in)


def init_weights(scheme: InitScheme, rows: int, cols: int,
                 seed: int | np.random.Generator) -> np.ndarray:
    """Sample a (rows x cols) weight matrix; fan-in is the column count."""
    if rows < 1 or cols < 1:
        raise ParameterError(f"matrix dimensions must be >= 1, got {rows}x{cols}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    r = scheme.half_range(cols)
    return rng.uniform(-r, r, size=(rows, cols))


def variance_correction(post_activation: np.ndarray, a: float) -> np.ndarray:
    """Divide snake post-activations by sigma_a = sqrt(snake_variance(a))."""
    return np.asarray(post_activation, dtype=np.float64) / math.sqrt(snake_variance(a))

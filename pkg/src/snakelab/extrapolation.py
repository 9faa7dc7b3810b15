"""Ray asymptotics of trained or random networks.

Along a ray z * u (unit direction u, scalar z -> infinity) a piecewise-linear
network becomes exactly affine in z once every unit's sign pattern freezes,
a saturating network becomes constant, and a snake network keeps a periodic
residual of fixed amplitude forever.  ``probe_ray`` measures all three
behaviours on one network: it fits an affine function of z over the
largest-z half of a geometric grid (the "asymptotic window"), records the
deviation from constancy over the same window, and scans the residual
against the fitted affine on a uniform grid so that a persistent periodic
component shows up as a sharp spectral peak.

Residuals on the asymptotic window are reported relative to
max(1, ||f(z_max u)||), which keeps the certification scale-free whether the
outputs grow linearly or level off.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .network import Mlp

#: default geometric probe grid: 64 points from 1 to 2^30
DEFAULT_Z_GRID = np.geomspace(1.0, 2.0 ** 30, 64)

# uniform residual-scan grid used for spectral classification
_SCAN_POINTS = 4096
_SCAN_SPAN = 1024.0

# a periodic residual must persist at this absolute amplitude on the
# asymptotic window; float rounding at |f| ~ 2^30 sits far below it
_PERIODIC_FLOOR = 1e-3


class Asymptotics(enum.Enum):
    AFFINE = "affine"
    CONSTANT = "constant"
    PERIODIC_RESIDUAL = "periodic_residual"
    UNDETERMINED = "undetermined"


@dataclass
class RayProbeReport:
    """Measurements of f(z u) along one ray."""

    direction: np.ndarray        # unit vector, d_1
    z: np.ndarray                # geometric probe grid
    outputs: np.ndarray          # (len(z), d_out)
    slope: np.ndarray            # fitted d f / d z per output coordinate
    intercept: np.ndarray        # fitted intercept per output coordinate
    limit_value: np.ndarray      # f(z_max u), the candidate constant v_u
    affine_residual: float       # relative, largest-z half of the grid
    constancy_deviation: float   # relative, largest-z half of the grid
    asymptotic_residual_amplitude: float  # absolute max |f - fit|, same window
    scan_z: np.ndarray           # uniform grid for the spectral test
    scan_residual: np.ndarray    # f - fitted affine on scan_z, (n, d_out)

    def to_dict(self) -> dict:
        return {
            "direction": self.direction.tolist(),
            "slope": self.slope.tolist(),
            "intercept": self.intercept.tolist(),
            "residual": self.affine_residual,
            "constancy_deviation": self.constancy_deviation,
            "class": classify_asymptotics(self).value,
        }


def random_direction(dim: int, rng: np.random.Generator) -> np.ndarray:
    u = rng.standard_normal(dim)
    return u / np.linalg.norm(u)


def probe_ray(net: Mlp, u: np.ndarray, z_grid: np.ndarray | None = None) -> RayProbeReport:
    """Probe f(z u) over a geometric z grid and fit its asymptotic form."""
    u = np.asarray(u, dtype=np.float64).ravel()
    if abs(np.linalg.norm(u) - 1.0) > 1e-9:
        raise ContractError(f"direction must be a unit vector, |u| = {np.linalg.norm(u)}")
    z = DEFAULT_Z_GRID if z_grid is None else np.asarray(z_grid, dtype=np.float64)
    if len(z) < 8:
        raise ContractError(f"z grid too short ({len(z)} points, need >= 8)")
    if np.any(z <= 0) or np.any(np.diff(z) <= 0):
        raise ContractError("z grid must be strictly increasing and positive")

    F = net.forward(z[:, None] * u[None, :])
    top = slice(len(z) // 2, None)
    zt, Ft = z[top], F[top]

    # least-squares affine fit per output coordinate, on z scaled to (0, 1]
    # for conditioning; slope is rescaled back afterwards
    s = zt / zt[-1]
    A = np.stack([s, np.ones_like(s)], axis=1)
    coef, *_ = np.linalg.lstsq(A, Ft, rcond=None)
    slope = coef[0] / zt[-1]
    intercept = coef[1]

    limit_value = F[-1]
    scale = max(1.0, float(np.linalg.norm(limit_value)))
    fit_top = np.outer(zt, slope) + intercept
    resid_top = Ft - fit_top
    affine_residual = float(np.abs(resid_top).max()) / scale
    constancy_deviation = float(np.abs(Ft - limit_value).max()) / scale

    scan_z = np.linspace(0.0, _SCAN_SPAN, _SCAN_POINTS, endpoint=False)
    scan_f = net.forward(scan_z[:, None] * u[None, :])
    scan_residual = scan_f - (np.outer(scan_z, slope) + intercept)

    return RayProbeReport(u, z, F, slope, intercept, limit_value,
                          affine_residual, constancy_deviation,
                          float(np.abs(resid_top).max()), scan_z, scan_residual)


def residual_spectrum(report: RayProbeReport) -> tuple[np.ndarray, np.ndarray]:
    """(frequencies in cycles per unit z, combined |rfft| of the scan residual)."""
    mags = np.abs(np.fft.rfft(report.scan_residual, axis=0))
    combined = np.linalg.norm(mags, axis=1)
    freqs = np.fft.rfftfreq(len(report.scan_z), d=report.scan_z[1] - report.scan_z[0])
    return freqs, combined


def classify_asymptotics(report: RayProbeReport) -> Asymptotics:
    """Label a ray probe as constant, periodic-residual, affine, or undetermined.

    Constancy is checked first (a saturated net also fits an affine with zero
    slope).  The periodic check runs before the affine one because a snake
    net's bounded residual vanishes *relative* to outputs growing like z, yet
    persists at fixed absolute amplitude; it requires both a dominant nonzero
    spectral peak (>= 5x the median magnitude) and persistence of the
    asymptotic-window residual above an absolute floor.
    """
    if float(np.abs(report.slope).max()) < 1e-10 and report.constancy_deviation < 1e-8:
        return Asymptotics.CONSTANT
    if report.asymptotic_residual_amplitude >= _PERIODIC_FLOOR:
        _, mags = residual_spectrum(report)
        peak = mags[1:].max()
        median = float(np.median(mags))
        if median > 0 and peak >= 5.0 * median:
            return Asymptotics.PERIODIC_RESIDUAL
    if report.affine_residual < 1e-9:
        return Asymptotics.AFFINE
    return Asymptotics.UNDETERMINED


def extrapolation_mse(net: Mlp, target, train_range: tuple[float, float] = (-5.0, 5.0),
                      test_ranges: dict[str, tuple[float, float]] | None = None,
                      points: int = 512) -> dict[str, float]:
    """MSE of a 1-D net against a target over named evaluation ranges.

    Defaults follow the gap protocol: interpolation over the held-out
    interior gap, extrapolation over one training-span width on each side.
    """
    if test_ranges is None:
        lo, hi = train_range
        span = hi - lo
        test_ranges = {
            "gap": (-1.0, 1.0),
            "left_extrapolation": (lo - span / 2, lo),
            "right_extrapolation": (hi, hi + span / 2),
        }
    out = {}
    for name, (lo, hi) in test_ranges.items():
        x = np.linspace(lo, hi, points)
        err = net.predict_1d(x) - np.asarray(target(x), dtype=np.float64).ravel()
        out[name] = float(np.mean(err * err))
    return out

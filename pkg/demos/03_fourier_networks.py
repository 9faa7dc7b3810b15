"""Building networks that *are* Fourier partial sums, exactly.

Two snake neurons with opposite input weights realize one cosine, so any
order-m trigonometric polynomial becomes a 4m-neuron one-hidden-layer net
with closed-form weights: no training, machine-precision equality, and the
equality holds on all of R, so extrapolation is free.

Run:  python demos/03_fourier_networks.py
Writes demos/out/square_wave_net.csv for plotting.
"""

import csv
import math
from pathlib import Path

import numpy as np

from snakelab import (bounded_approx_check, build_fourier_net,
                      fourier_coefficients, snake_cos_pair, CapacityError)

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

# --- one cosine from two snake neurons ------------------------------------
pair = snake_cos_pair(omega=2.0, a=1.0)
x = np.linspace(-10, 10, 2001)
print("cos(2x) from a 2-neuron snake block, max error:",
      f"{np.abs(pair.evaluate(x) - np.cos(2 * x)).max():.2e}")

# --- a square wave, order 51 ----------------------------------------------
square = lambda t: np.where(np.sin(t) >= 0, 1.0, -1.0)
spec = fourier_coefficients(square, math.pi, 51, quadrature_points=2 ** 17)
net = build_fourier_net(spec, a=1.0)
print(f"square wave, order 51: hidden width {net.widths[1]}")

x = np.linspace(-3 * math.pi, 3 * math.pi, 12_001)
net_y = net.predict_1d(x)
print("net vs direct partial sum:",
      f"{np.abs(net_y - spec.partial_sum(x)).max():.2e}")
dist = np.abs(x / math.pi - np.round(x / math.pi)) * math.pi
far = dist >= 0.1 * math.pi
print("net vs the wave itself, away from jumps:",
      f"{np.abs(net_y - square(x))[far].max():.3f} "
      f"(the Gibbs overshoot near jumps never goes away)")

with open(OUT / "square_wave_net.csv", "w", newline="") as f:
    writer = csv.writer(f, lineterminator="\n")
    writer.writerow(["x", "net", "target"])
    for xv, nv, tv in zip(x[::4], net_y[::4], square(x)[::4]):
        writer.writerow([f"{xv:.5f}", f"{nv:.6f}", f"{tv:.1f}"])
print(f"wrote {OUT / 'square_wave_net.csv'}")

# --- how much width does a tolerance cost? ---------------------------------
m = bounded_approx_check(np.square, (-1.0, 1.0), 1e-2)
print(f"\nx^2 on [-1, 1] to within 1e-2: order {m} suffices "
      f"({4 * m} + 2 neurons)")
try:
    bounded_approx_check(square, (-math.pi, math.pi), 1e-3)
except CapacityError as err:
    print(f"square wave to 1e-3: {err} (jumps defeat uniform convergence)")

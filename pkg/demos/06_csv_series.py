"""Fitting a periodic model to a CSV time series.

Builds a synthetic "daily measurement" file, ingests it (weekly-mean
resampling, normalization), trains a snake net on the normalized series,
and extrapolates half a span beyond the data.  Swap in your own CSV with a
time column and a value column to rerun the study on real data.

Run:  python demos/06_csv_series.py
"""

import csv
import math
from pathlib import Path

import numpy as np

from snakelab import (Activation, Adam, InitScheme, Mlp, MlpConfig,
                      TrainConfig, train)
from snakelab.experiments import ingest_csv

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

# --- fake two years of daily data with a yearly cycle ----------------------
rng = np.random.default_rng(42)
days = np.arange(730.0)
values = (15.0 + 10.0 * np.sin(2 * math.pi * days / 365.25 - 1.3)
          + rng.normal(0.0, 1.0, days.size))
raw = OUT / "daily_series.csv"
with open(raw, "w", newline="") as f:
    writer = csv.writer(f, lineterminator="\n")
    writer.writerow(["day", "reading"])
    for d, v in zip(days, values):
        writer.writerow([f"{d:.0f}", f"{v:.4f}"])

# --- ingest: weekly means, affine normalization recorded --------------------
series = ingest_csv(raw, "day", "reading", resample="weekly")
print(f"{len(days)} daily rows -> {len(series.timestamps)} weekly means")
X, Y = series.to_training_arrays()

# --- fit and extrapolate -----------------------------------------------------
net = Mlp.build(MlpConfig((1, 100, 100, 1),
                          Activation("snake_learnable", a=8.0),
                          init=InitScheme("snake_corrected"), seed=7))
net, trace = train(net, (X, Y),
                   TrainConfig(optimizer=Adam(lr=2e-3), steps=4000, seed=7))
print(f"final training mse (normalized units): {trace[-1]:.4f}")
print(f"learned frequencies per layer: "
      f"{[round(a, 3) for a in net.layer_a]} (started at 8.0)")

future = series.timestamps[-1] + np.arange(1, 183, 7.0)
pred = net.predict_1d(series.time_map.normalize(future))
pred = series.value_map.denormalize(pred)
truth = 15.0 + 10.0 * np.sin(2 * math.pi * future / 365.25 - 1.3)
print(f"half a year beyond the data: rms error "
      f"{np.sqrt(np.mean((pred - truth) ** 2)):.2f} "
      f"(series std {values.std():.2f})")

"""Frequency bias of a, and what order the network learns things in.

Part 1 regresses sin(x) + sin(4x)/4 at two frequency settings: a small a
treats the fast component as noise, a large a picks it up and extrapolates
both.  Part 2 tracks the output spectrum across training checkpoints: the
model is linear first, then grows the slow harmonic, then the fast one.

Run:  python demos/05_frequency_and_spectra.py   (a few minutes of training)
Writes demos/out/sin_mix_spectrum.csv.
"""

import math
from pathlib import Path

from snakelab import Activation, Adam, TrainConfig
from snakelab.experiments import SyntheticTask, a_sweep, spectral_trajectory

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

task = SyntheticTask("sin_mix", seed=0)
cfg = TrainConfig(optimizer=Adam(lr=1e-3), steps=1000)

# --- small vs large a -------------------------------------------------------
report = a_sweep(task, [1.0, 16.0], runs=3, train_cfg=cfg, width=512,
                 rescale=True, base_seed=0)
print("sin(x) + sin(4x)/4, extrapolation error by frequency setting:")
for row in report["sweep"]:
    print(f"  a = {row['a']:>4g}: median extrapolation mse "
          f"{row['median_extrapolation_mse']:.3f}, dominant learned "
          f"frequency {row['median_dominant_frequency']:.3f} cycles/x "
          f"(target base: {1 / (2 * math.pi):.3f})")

# --- checkpointed spectra ----------------------------------------------------
traj = spectral_trajectory(task, Activation("snake", a=16.0),
                           checkpoint_stride=50, train_cfg=cfg, width=512,
                           rescale=True, seed=3001)
(OUT / "sin_mix_spectrum.csv").write_text(traj.to_csv())
span = 4 * 2 * math.pi
low_bin, high_bin = 4, 16  # base harmonic and its 4x companion on this grid
low, high = traj.crossing_index(low_bin), traj.crossing_index(high_bin)
print(f"\nspectral trajectory ({len(traj.steps)} checkpoints, "
      f"threshold {traj.threshold:.1f}):")
print(f"  slow component crosses at checkpoint {low} "
      f"(step {traj.steps[low]})")
print(f"  fast component crosses at checkpoint {high} "
      f"(step {traj.steps[high] if high is not None else '-'})"
      if high is not None else
      "  fast component stays under threshold this run")
print("  frontier frequency per checkpoint:",
      ", ".join(f"{traj.frontier_frequency(i):.3f}"
                for i in range(len(traj.steps))))
print(f"wrote {OUT / 'sin_mix_spectrum.csv'}")

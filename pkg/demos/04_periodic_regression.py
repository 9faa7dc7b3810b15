"""The gap-regression experiment: who extrapolates a sine?

Trains small one-hidden-layer nets on sin(x) sampled over [-5, 5] with the
interior [-1, 1] held out, then scores the gap and the regions beyond the
data.  relu and tanh fit the band and then extrapolate by straight lines or
constants; snake walks off the band still oscillating at the right
frequency.

Run:  python demos/04_periodic_regression.py   (about a minute of training)
Writes demos/out/sin_comparison_{curves.csv,report.json}.
"""

from pathlib import Path

from snakelab import Activation, Adam, TrainConfig
from snakelab.experiments import SyntheticTask, run_comparison, write_report

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

task = SyntheticTask("sin", seed=0)
cfg = TrainConfig(optimizer=Adam(lr=1e-3), steps=1000)

result = run_comparison(
    task,
    [Activation("snake", a=10.0), Activation("relu"), Activation("tanh")],
    runs=5, train_cfg=cfg, width=512, rescale=True, base_seed=0)

print(f"{'activation':12s} {'train':>9s} {'gap':>9s} {'left':>9s} {'right':>9s}")
for row in result.report["activations"]:
    med = row["median_mse"]
    train_med = sorted(r["train_mse"] for r in row["runs"])[len(row["runs"]) // 2]
    print(f"{row['name']:12s} {train_med:9.2e} {med['gap']:9.4f} "
          f"{med['left_extrapolation']:9.4f} {med['right_extrapolation']:9.4f}")

write_report(result.report, OUT / "sin_comparison_report.json")
(OUT / "sin_comparison_curves.csv").write_text(result.curves_csv())
print(f"\nwrote {OUT / 'sin_comparison_report.json'}")
print(f"wrote {OUT / 'sin_comparison_curves.csv'} "
      f"(x, median, p5, p95 per activation -- ready to plot)")

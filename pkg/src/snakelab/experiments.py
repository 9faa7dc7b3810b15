"""Synthetic regression tasks, CSV ingestion, and the experiment harness.

The harness reproduces the gap-regression protocol: draw training points
from an analytic target on a band with an excluded interior gap, train small
MLPs with different activations, then score interpolation (on the gap) and
extrapolation (beyond the band) separately.  Sweeps over the snake frequency
and per-checkpoint output spectra build on the same machinery.

Every run is keyed by integer seeds through numpy's SeedSequence, so a
report built twice from the same inputs is byte-identical.
"""

from __future__ import annotations

import csv
import datetime
import io
import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .activations import Activation
from .errors import ContractError, IngestionError, ParameterError, TrainingDivergedError
from .extrapolation import extrapolation_mse
from .initialization import InitScheme
from .network import Adam, Mlp, MlpConfig, TrainConfig, train

REPORT_SCHEMA_VERSION = 1

GENERATORS = {
    "linear": lambda x: np.asarray(x, dtype=np.float64) + 0.0,
    "tanh": np.tanh,
    "sin": np.sin,
    "quadratic": lambda x: np.square(np.asarray(x, dtype=np.float64)),
    "rect": lambda x: np.where(np.sin(x) >= 0, 1.0, -1.0),
    "sin_mix": lambda x: np.sin(x) + np.sin(4 * np.asarray(x, dtype=np.float64)) / 4,
    "slow_mix": lambda x: np.cos(np.asarray(x, dtype=np.float64) / 2)
                          + 2 * np.sin(np.asarray(x, dtype=np.float64) / 3),
    "sin_low": lambda x: np.sin(0.1 * np.asarray(x, dtype=np.float64)),
}

#: fundamental periods of the periodic targets (used to size FFT grids)
PERIODS = {
    "sin": 2 * math.pi,
    "rect": 2 * math.pi,
    "sin_mix": 2 * math.pi,
    "slow_mix": 12 * math.pi,
    "sin_low": 20 * math.pi,
}


@dataclass(frozen=True)
class SyntheticTask:
    """A named 1-D regression problem with a training band and interior gap."""

    name: str
    train_range: tuple[float, float] = (-5.0, 5.0)
    gap: tuple[float, float] | None = (-1.0, 1.0)
    n_train: int = 200
    noise_var: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.name not in GENERATORS:
            raise ParameterError(f"unknown task {self.name!r}; "
                                 f"expected one of {sorted(GENERATORS)}")
        if self.noise_var < 0:
            raise ParameterError("noise variance cannot be negative")

    def target(self, x) -> np.ndarray:
        return np.asarray(GENERATORS[self.name](np.asarray(x, dtype=np.float64)),
                          dtype=np.float64)

    @property
    def period(self) -> float | None:
        return PERIODS.get(self.name)

    def to_dict(self) -> dict:
        return {"name": self.name, "train_range": list(self.train_range),
                "gap": list(self.gap) if self.gap else None,
                "n_train": self.n_train, "noise_var": self.noise_var,
                "seed": self.seed}


def generate(task: SyntheticTask):
    """(X_train, Y_train, X_test, Y_test) as (n, 1) column matrices.

    Training inputs are uniform on the band minus the gap; the test grid is
    evenly spaced over twice the band, so gap points appear only in testing.
    Noise (variance ``noise_var``) lands on the training targets only.
    """
    rng = np.random.default_rng(task.seed)
    lo, hi = task.train_range
    xs: list[float] = []
    while len(xs) < task.n_train:
        draw = rng.uniform(lo, hi, size=2 * task.n_train)
        if task.gap is not None:
            glo, ghi = task.gap
            draw = draw[(draw < glo) | (draw > ghi)]
        xs.extend(draw.tolist())
    x_train = np.sort(np.array(xs[:task.n_train]))
    y_train = task.target(x_train)
    if task.noise_var > 0:
        y_train = y_train + rng.normal(0.0, math.sqrt(task.noise_var),
                                       size=y_train.shape)
    span = hi - lo
    x_test = np.linspace(lo - span / 2, hi + span / 2, 1024)
    y_test = task.target(x_test)
    return (x_train[:, None], y_train[:, None], x_test[:, None], y_test[:, None])


# -- single fits -----------------------------------------------------------


@dataclass
class FitResult:
    net: Mlp
    trace: np.ndarray
    task: SyntheticTask
    x_test: np.ndarray
    y_test: np.ndarray

    def range_mse(self) -> dict[str, float]:
        return extrapolation_mse(self.net, self.task.target, self.task.train_range,
                                 test_ranges=_ranges_for(self.task))


def _ranges_for(task: SyntheticTask) -> dict[str, tuple[float, float]]:
    lo, hi = task.train_range
    span = hi - lo
    ranges = {"left_extrapolation": (lo - span / 2, lo),
              "right_extrapolation": (hi, hi + span / 2)}
    if task.gap is not None:
        ranges["gap"] = task.gap
    return ranges


def default_train_config() -> TrainConfig:
    return TrainConfig(optimizer=Adam(lr=1e-3), steps=1000, batch_size=None)


def fit_task(task: SyntheticTask, activation: Activation, width: int = 512,
             train_cfg: TrainConfig | None = None, rescale: bool = True,
             seed: int = 0, on_step=None) -> FitResult:
    """Train a 1-hidden-layer net (band rescaled to [-1, 1] when asked)."""
    cfg = train_cfg or default_train_config()
    init = InitScheme("snake" if activation.is_snake else "kaiming")
    net = Mlp.build(MlpConfig((1, width, 1), activation, init=init, seed=seed))
    if rescale:
        lo, hi = task.train_range
        net.input_norm = ((lo + hi) / 2.0, (hi - lo) / 2.0)
    x, y, xt, yt = generate(task)
    net, trace = train(net, (x, y), replace(cfg, seed=seed), on_step=on_step)
    return FitResult(net, trace, task, xt, yt)


def _run_seed(*entropy: int) -> int:
    return int(np.random.SeedSequence(list(entropy)).generate_state(1)[0])


# -- activation comparison ---------------------------------------------------


@dataclass
class ComparisonResult:
    report: dict
    x: np.ndarray
    curves: dict[str, dict[str, np.ndarray]]  # label -> {median, p5, p95}

    def curves_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        labels = list(self.curves)
        writer.writerow(["x"] + [f"{lab}_{stat}" for lab in labels
                                 for stat in ("median", "p5", "p95")])
        for i, xv in enumerate(self.x):
            row = [repr(float(xv))]
            for lab in labels:
                c = self.curves[lab]
                row += [repr(float(c[s][i])) for s in ("median", "p5", "p95")]
            writer.writerow(row)
        return buf.getvalue()


def _label(act: Activation) -> str:
    name = "snake_learnable" if (act.is_snake and act.learnable_a) else act.kind
    if act.is_snake:
        return f"{name}_a{act.a:g}"
    return name


def run_comparison(task: SyntheticTask, activations: list[Activation],
                   runs: int = 1, train_cfg: TrainConfig | None = None,
                   width: int = 512, rescale: bool = True,
                   base_seed: int = 0) -> ComparisonResult:
    """Train each activation over several seeds; summarize curves and MSEs.

    Curves are the pointwise median with 5/95 percentile bands over runs.
    Runs that diverge are recorded, flagged, and excluded from the bands
    and medians.
    """
    if runs < 1:
        raise ContractError("need at least one run")
    _, _, x_test, _ = generate(task)
    xg = x_test.ravel()
    per_act, curves = [], {}
    for ai, act in enumerate(activations):
        run_rows, preds = [], []
        for ri in range(runs):
            seed = _run_seed(base_seed, ai, ri)
            row = {"seed": seed, "diverged": False}
            try:
                fit = fit_task(task, act, width, train_cfg, rescale, seed)
                row["train_mse"] = float(fit.trace[-1])
                row["mse"] = {k: float(v) for k, v in fit.range_mse().items()}
                preds.append(fit.net.predict_1d(xg))
            except TrainingDivergedError as err:
                row["diverged"] = True
                row["diverged_at_step"] = err.step
            run_rows.append(row)
        ok = [r for r in run_rows if not r["diverged"]]
        summary = {"name": _label(act), "kind": act.kind, "a": act.a,
                   "learnable_a": act.learnable_a, "runs": run_rows,
                   "n_diverged": len(run_rows) - len(ok)}
        if ok:
            for stat, q in (("median", 50), ("p5", 5), ("p95", 95)):
                summary[f"{stat}_mse"] = {
                    k: float(np.percentile([r["mse"][k] for r in ok], q))
                    for k in ok[0]["mse"]}
        per_act.append(summary)
        if preds:
            stack = np.stack(preds)
            curves[_label(act)] = {
                "median": np.percentile(stack, 50, axis=0),
                "p5": np.percentile(stack, 5, axis=0),
                "p95": np.percentile(stack, 95, axis=0)}
    cfg = train_cfg or default_train_config()
    report = {"schema_version": REPORT_SCHEMA_VERSION, "kind": "comparison",
              "task": task.to_dict(), "width": width, "rescale": rescale,
              "runs": runs, "base_seed": base_seed,
              "steps": cfg.steps, "optimizer": type(cfg.optimizer).__name__,
              "lr": cfg.optimizer.lr, "activations": per_act}
    return ComparisonResult(report, xg, curves)


# -- frequency sweep ---------------------------------------------------------


def dominant_frequency(net: Mlp, task: SyntheticTask) -> float:
    """Strongest nonzero frequency (cycles per x unit) of the net's output
    over a uniform extrapolation grid, after removing the best linear fit."""
    lo, hi = task.train_range
    span = 4 * task.period if task.period else 4 * (hi - lo)
    x = np.linspace(hi, hi + span, 4096, endpoint=False)
    y = net.predict_1d(x)
    A = np.stack([x, np.ones_like(x)], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    mags = np.abs(np.fft.rfft(y - A @ coef))
    bin_idx = 1 + int(np.argmax(mags[1:]))
    return bin_idx / span


def a_sweep(task: SyntheticTask, a_values: list[float], runs: int = 1,
            train_cfg: TrainConfig | None = None, width: int = 512,
            rescale: bool = True, base_seed: int = 0) -> dict:
    """Extrapolation error and dominant learned frequency per snake frequency."""
    rows = []
    for ai, a in enumerate(a_values):
        act = Activation("snake", a=float(a))
        per_run = []
        for ri in range(runs):
            seed = _run_seed(base_seed, 1000 + ai, ri)
            entry = {"seed": seed, "diverged": False}
            try:
                fit = fit_task(task, act, width, train_cfg, rescale, seed)
                mse = fit.range_mse()
                extrap = float(np.mean([mse["left_extrapolation"],
                                        mse["right_extrapolation"]]))
                entry.update(train_mse=float(fit.trace[-1]),
                             extrapolation_mse=extrap,
                             mse={k: float(v) for k, v in mse.items()},
                             dominant_frequency=dominant_frequency(fit.net, task))
            except TrainingDivergedError as err:
                entry.update(diverged=True, diverged_at_step=err.step)
            per_run.append(entry)
        ok = [e for e in per_run if not e["diverged"]]
        row = {"a": float(a), "runs": per_run,
               "n_diverged": len(per_run) - len(ok)}
        if ok:
            row["median_extrapolation_mse"] = float(
                np.median([e["extrapolation_mse"] for e in ok]))
            row["median_dominant_frequency"] = float(
                np.median([e["dominant_frequency"] for e in ok]))
        rows.append(row)
    return {"schema_version": REPORT_SCHEMA_VERSION, "kind": "a_sweep",
            "task": task.to_dict(), "width": width, "rescale": rescale,
            "runs": runs, "base_seed": base_seed, "sweep": rows}


def noise_sweep(task: SyntheticTask, noise_vars: list[float],
                activation: Activation, runs: int = 1,
                train_cfg: TrainConfig | None = None, width: int = 512,
                rescale: bool = True, base_seed: int = 0) -> dict:
    """Extrapolation error as training-noise variance grows.

    Feedforward stand-in for recurrent baselines on noisy periodic series:
    the quantity of interest is how gracefully extrapolation degrades with
    the noise floor.
    """
    rows = []
    for ni, nv in enumerate(noise_vars):
        noisy = replace(task, noise_var=float(nv))
        per_run = []
        for ri in range(runs):
            seed = _run_seed(base_seed, 2000 + ni, ri)
            fit = fit_task(noisy, activation, width, train_cfg, rescale, seed)
            mse = fit.range_mse()
            per_run.append({"seed": seed,
                            "extrapolation_mse": float(np.mean(
                                [mse["left_extrapolation"], mse["right_extrapolation"]]))})
        rows.append({"noise_var": float(nv), "runs": per_run,
                     "median_extrapolation_mse": float(np.median(
                         [e["extrapolation_mse"] for e in per_run]))})
    return {"schema_version": REPORT_SCHEMA_VERSION, "kind": "noise_sweep",
            "task": task.to_dict(), "activation": _label(activation),
            "note": "feedforward replacement for the recurrent comparison",
            "runs": runs, "base_seed": base_seed, "sweep": rows}


# -- spectral learning trajectory --------------------------------------------


@dataclass
class SpectralTrajectory:
    """Per-checkpoint output spectra of a net during training.

    ``mags[i, k]`` is the detrended output spectrum magnitude of frequency
    bin k at checkpoint i (checkpoint 0 is the untrained net).  The crossing
    threshold is a fixed fraction of the largest magnitude seen anywhere in
    the trajectory, so early near-linear checkpoints sit below it.
    """

    steps: list[int]
    freqs: np.ndarray
    mags: np.ndarray
    threshold_fraction: float = 0.1

    @property
    def threshold(self) -> float:
        return self.threshold_fraction * float(self.mags.max())

    def crossing_index(self, freq_bin: int) -> int | None:
        """First checkpoint at which a bin rises above the threshold."""
        hits = np.nonzero(self.mags[:, freq_bin] >= self.threshold)[0]
        return int(hits[0]) if len(hits) else None

    def frontier_frequency(self, checkpoint: int) -> float:
        """Highest frequency whose magnitude exceeds the threshold (0 if none)."""
        above = np.nonzero(self.mags[checkpoint, 1:] >= self.threshold)[0]
        return float(self.freqs[1 + above[-1]]) if len(above) else 0.0

    def bin_of(self, frequency: float) -> int:
        return int(np.argmin(np.abs(self.freqs - frequency)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["checkpoint", "step", "frequency_bin", "frequency",
                         "magnitude"])
        for i, step in enumerate(self.steps):
            for k in range(len(self.freqs)):
                writer.writerow([i, step, k, repr(float(self.freqs[k])),
                                 repr(float(self.mags[i, k]))])
        return buf.getvalue()


def spectral_trajectory(task: SyntheticTask, activation: Activation,
                        checkpoint_stride: int = 100,
                        train_cfg: TrainConfig | None = None, width: int = 512,
                        rescale: bool = True, seed: int = 0) -> SpectralTrajectory:
    """Track the detrended output spectrum of a net as training progresses."""
    cfg = train_cfg or default_train_config()
    period = task.period or (task.train_range[1] - task.train_range[0])
    span = 4 * period
    x = np.linspace(-span / 2, span / 2, 4096, endpoint=False)
    A = np.stack([x, np.ones_like(x)], axis=1)
    freqs = np.fft.rfftfreq(len(x), d=x[1] - x[0])

    def spectrum(net: Mlp) -> np.ndarray:
        y = net.predict_1d(x)
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        return np.abs(np.fft.rfft(y - A @ coef))

    steps, mags = [], []

    init = InitScheme("snake" if activation.is_snake else "kaiming")
    net = Mlp.build(MlpConfig((1, width, 1), activation, init=init, seed=seed))
    if rescale:
        lo, hi = task.train_range
        net.input_norm = ((lo + hi) / 2.0, (hi - lo) / 2.0)
    steps.append(0)
    mags.append(spectrum(net))

    def on_step(step: int, live: Mlp) -> None:
        done = step + 1
        if done % checkpoint_stride == 0 or done == cfg.steps:
            steps.append(done)
            mags.append(spectrum(live))

    x_tr, y_tr, _, _ = generate(task)
    train(net, (x_tr, y_tr), replace(cfg, seed=seed), on_step=on_step)
    return SpectralTrajectory(steps, freqs, np.stack(mags))


# -- CSV ingestion -----------------------------------------------------------


@dataclass(frozen=True)
class AffineMap:
    """raw = norm * scale + shift."""

    shift: float
    scale: float

    def normalize(self, raw: np.ndarray) -> np.ndarray:
        return (np.asarray(raw, dtype=np.float64) - self.shift) / self.scale

    def denormalize(self, norm: np.ndarray) -> np.ndarray:
        return np.asarray(norm, dtype=np.float64) * self.scale + self.shift


@dataclass
class SeriesDataset:
    """An ingested time series plus the affine maps used to normalize it."""

    timestamps: np.ndarray
    values: np.ndarray
    time_map: AffineMap
    value_map: AffineMap

    def to_training_arrays(self):
        """Normalized (X, Y) column matrices ready for :func:`train`."""
        return (self.time_map.normalize(self.timestamps)[:, None],
                self.value_map.normalize(self.values)[:, None])


def _parse_time(text: str) -> float:
    """Numeric timestamps pass through; ISO dates become fractional days."""
    try:
        return float(text)
    except ValueError:
        dt = datetime.datetime.fromisoformat(text.strip())
        return dt.timestamp() / 86400.0


def ingest_csv(path, time_column: str, value_column: str,
               resample: str | None = None) -> SeriesDataset:
    """Load (time, value) pairs from a CSV file.

    Blank lines are skipped; rows whose fields fail to parse are dropped,
    but if they exceed 10% of the data rows the whole ingestion fails with
    samples of the offending rows.  Duplicate timestamps are averaged, and
    ``resample='weekly'`` replaces the series by means over consecutive
    7-day windows counted from the first timestamp.
    """
    times, values, bad = [], [], []
    n_rows = 0
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None:
            raise IngestionError(f"{path}: no header row")
        for col in (time_column, value_column):
            if col not in reader.fieldnames:
                raise IngestionError(f"{path}: no column {col!r} "
                                     f"(have {reader.fieldnames})")
        for row in reader:
            cells = [v for v in row.values() if v is not None and v.strip()]
            if not cells:
                continue
            n_rows += 1
            try:
                t = _parse_time(row[time_column])
                v = float(row[value_column])
            except (TypeError, ValueError, KeyError):
                bad.append(dict(row))
                continue
            if math.isnan(t) or math.isnan(v):
                bad.append(dict(row))
                continue
            times.append(t)
            values.append(v)
    if n_rows == 0:
        raise IngestionError(f"{path}: no data rows")
    if len(bad) > 0.10 * n_rows:
        samples = "; ".join(str(r) for r in bad[:5])
        raise IngestionError(f"{path}: {len(bad)}/{n_rows} rows unparseable, "
                             f"e.g. {samples}")

    t = np.array(times)
    v = np.array(values)
    order = np.argsort(t, kind="stable")
    t, v = t[order], v[order]
    # average duplicated timestamps so the axis is strictly increasing
    uniq, inverse = np.unique(t, return_inverse=True)
    if len(uniq) < len(t):
        sums = np.bincount(inverse, weights=v)
        counts = np.bincount(inverse)
        t, v = uniq, sums / counts

    if resample == "weekly":
        bucket = np.floor((t - t[0]) / 7.0).astype(int)
        uniq_b = np.unique(bucket)
        t = np.array([t[bucket == b].mean() for b in uniq_b])
        v = np.array([v[bucket == b].mean() for b in uniq_b])
    elif resample is not None:
        raise ParameterError(f"unknown resample rule {resample!r}")

    mid = (t[-1] + t[0]) / 2.0
    half = (t[-1] - t[0]) / 2.0 or 1.0
    vstd = float(v.std()) or 1.0
    return SeriesDataset(t, v, AffineMap(mid, half),
                         AffineMap(float(v.mean()), vstd))


# -- report output -----------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj)}")


def report_json(report: dict) -> str:
    """Deterministic JSON text: sorted keys, stable float repr."""
    return json.dumps(report, sort_keys=True, indent=2, default=_jsonable) + "\n"


def write_report(report: dict, path) -> None:
    with open(path, "w") as f:
        f.write(report_json(report))

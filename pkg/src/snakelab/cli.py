"""Command-line front end.

Subcommands mirror the library: ``generate``, ``train``, ``compare``,
``sweep-a``, ``spectrum``, ``ingest``, ``extrapolate``, ``verify-fourier``.
Every command takes ``--seed`` and ``--out DIR`` and writes deterministic
artifacts (JSON reports with sorted keys, CSV tables) into the out
directory, so rerunning a command reproduces its outputs byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from .activations import Activation
from .errors import ParameterError
from .experiments import (GENERATORS, SyntheticTask, a_sweep, fit_task,
                          generate, ingest_csv, report_json, run_comparison,
                          spectral_trajectory)
from .extrapolation import probe_ray, random_direction
from .fourier import build_fourier_net, fourier_coefficients
from .initialization import INIT_KINDS
from .network import (SGD, Adam, TrainConfig, load_model, save_model)


def _parse_z(text: str) -> float:
    """Accept plain numbers and power notation like 2^30."""
    if "^" in text:
        base, exp = text.split("^", 1)
        return float(base) ** float(exp)
    return float(text)


def _parse_activation(args) -> Activation:
    return Activation.parse(args.activation, a=args.a, corrected=args.corrected)


def _task_from(args) -> SyntheticTask:
    return SyntheticTask(args.task, train_range=(args.range_lo, args.range_hi),
                         gap=None if args.no_gap else (args.gap_lo, args.gap_hi),
                         n_train=args.samples, noise_var=args.noise,
                         seed=args.seed)


def _train_cfg(args) -> TrainConfig:
    if args.optimizer == "sgd":
        opt = SGD(lr=args.lr, momentum=args.momentum,
                  weight_decay=args.weight_decay)
    else:
        opt = Adam(lr=args.lr)
    return TrainConfig(optimizer=opt, steps=args.steps,
                       batch_size=args.batch_size, seed=args.seed)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _add_task_args(p: argparse.ArgumentParser):
    p.add_argument("--task", required=True, choices=sorted(GENERATORS))
    p.add_argument("--range-lo", type=float, default=-5.0)
    p.add_argument("--range-hi", type=float, default=5.0)
    p.add_argument("--gap-lo", type=float, default=-1.0)
    p.add_argument("--gap-hi", type=float, default=1.0)
    p.add_argument("--no-gap", action="store_true")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--noise", type=float, default=0.0,
                   help="training-noise variance")


def _add_train_args(p: argparse.ArgumentParser):
    p.add_argument("--width", type=int, default=512)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--optimizer", choices=("adam", "sgd"), default="adam")
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--momentum", type=float, default=0.0)
    p.add_argument("--weight-decay", type=float, default=0.0)
    p.add_argument("--batch-size", type=int, default=None,
                   help="minibatch size (default: full batch)")
    p.add_argument("--rescale-inputs", dest="rescale", action="store_true",
                   default=True)
    p.add_argument("--no-rescale-inputs", dest="rescale", action="store_false")


def _write_xy_csv(path: Path, header: list[str], columns: list[np.ndarray]):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([repr(float(v)) for v in row])


def cmd_generate(args) -> int:
    out = _out_dir(args)
    task = _task_from(args)
    x, y, xt, yt = generate(task)
    _write_xy_csv(out / "train.csv", ["x", "y"], [x.ravel(), y.ravel()])
    _write_xy_csv(out / "test.csv", ["x", "y"], [xt.ravel(), yt.ravel()])
    (out / "task.json").write_text(report_json(task.to_dict()))
    print(f"wrote {task.n_train} training rows to {out / 'train.csv'}")
    return 0


def cmd_train(args) -> int:
    out = _out_dir(args)
    task = _task_from(args)
    act = _parse_activation(args)
    if args.init == "snake_corrected" and act.is_snake:
        act = act.with_corrected(True)
    fit = fit_task(task, act, width=args.width, train_cfg=_train_cfg(args),
                   rescale=args.rescale, seed=args.seed)
    save_model(fit.net, out / "model.snake")
    _write_xy_csv(out / "trace.csv", ["step", "mse"],
                  [np.arange(len(fit.trace), dtype=float), fit.trace])
    mse = fit.range_mse()
    (out / "report.json").write_text(report_json({
        "schema_version": 1, "kind": "train", "task": task.to_dict(), "activation": act.kind,
        "a": act.a, "final_train_mse": float(fit.trace[-1]),
        "mse": {k: float(v) for k, v in mse.items()}}))
    print(f"final training mse {fit.trace[-1]:.3e}; model at {out / 'model.snake'}")
    return 0


def cmd_compare(args) -> int:
    out = _out_dir(args)
    task = _task_from(args)
    acts = []
    for name in args.activations.split(","):
        acts.append(Activation.parse(name, a=args.a))
    result = run_comparison(task, acts, runs=args.runs,
                            train_cfg=_train_cfg(args), width=args.width,
                            rescale=args.rescale, base_seed=args.seed)
    (out / "report.json").write_text(report_json(result.report))
    (out / "curves.csv").write_text(result.curves_csv())
    for row in result.report["activations"]:
        med = row.get("median_mse", {})
        print(f"{row['name']}: median right-extrapolation mse ="
              f" {med.get('right_extrapolation', float('nan')):.4f}"
              f" ({row['n_diverged']} diverged)")
    return 0


def cmd_sweep_a(args) -> int:
    out = _out_dir(args)
    task = _task_from(args)
    a_values = [float(v) for v in args.a_values.split(",")]
    report = a_sweep(task, a_values, runs=args.runs,
                     train_cfg=_train_cfg(args), width=args.width,
                     rescale=args.rescale, base_seed=args.seed)
    (out / "report.json").write_text(report_json(report))
    for row in report["sweep"]:
        print(f"a={row['a']:g}: median extrapolation mse ="
              f" {row.get('median_extrapolation_mse', float('nan')):.4f}")
    return 0


def cmd_spectrum(args) -> int:
    out = _out_dir(args)
    task = _task_from(args)
    traj = spectral_trajectory(task, _parse_activation(args),
                               checkpoint_stride=args.stride,
                               train_cfg=_train_cfg(args), width=args.width,
                               rescale=args.rescale, seed=args.seed)
    (out / "spectrum.csv").write_text(traj.to_csv())
    frontier = [traj.frontier_frequency(i) for i in range(len(traj.steps))]
    (out / "report.json").write_text(report_json({
        "schema_version": 1, "kind": "spectrum", "task": task.to_dict(),
        "checkpoint_steps": traj.steps, "threshold": traj.threshold,
        "frontier_frequency": [float(f) for f in frontier]}))
    print(f"{len(traj.steps)} checkpoints; frontier frequency trail: "
          + ", ".join(f"{f:.3f}" for f in frontier))
    return 0


def cmd_ingest(args) -> int:
    out = _out_dir(args)
    series = ingest_csv(args.csv, args.time_column, args.value_column,
                        resample=args.resample)
    _write_xy_csv(out / "series.csv", ["t", "value"],
                  [series.timestamps, series.values])
    (out / "report.json").write_text(report_json({
        "schema_version": 1, "kind": "ingest", "rows": len(series.timestamps),
        "time_map": {"shift": series.time_map.shift,
                     "scale": series.time_map.scale},
        "value_map": {"shift": series.value_map.shift,
                      "scale": series.value_map.scale}}))
    print(f"ingested {len(series.timestamps)} rows -> {out / 'series.csv'}")
    return 0


def cmd_extrapolate(args) -> int:
    net = load_model(args.model)
    rng = np.random.default_rng(args.seed)
    z = np.geomspace(args.zmin, args.zmax, args.zpoints)
    rays = []
    for _ in range(args.rays):
        u = random_direction(net.widths[0], rng)
        rays.append(probe_ray(net, u, z).to_dict())
    report = {"schema_version": 1, "kind": "extrapolate", "model": str(args.model),
              "zmin": args.zmin, "zmax": args.zmax, "rays": rays}
    Path(args.report).parent.mkdir(parents=True, exist_ok=True)
    Path(args.report).write_text(report_json(report))
    classes = [r["class"] for r in rays]
    print(f"{len(rays)} rays -> " + ", ".join(
        f"{c}: {classes.count(c)}" for c in sorted(set(classes))))
    return 0


_FOURIER_TARGETS = {
    "square": lambda x: np.where(np.sin(x) >= 0, 1.0, -1.0),
    "saw": lambda x: (np.mod(x + math.pi, 2 * math.pi) - math.pi) / math.pi,
    "sin_mix": GENERATORS["sin_mix"],
}


def cmd_verify_fourier(args) -> int:
    if args.target == "custom-csv":
        if not args.csv:
            raise ParameterError("--target custom-csv needs --csv FILE")
        series = ingest_csv(args.csv, args.time_column, args.value_column)
        t0, v0 = series.timestamps, series.values
        half = (t0[-1] - t0[0]) / 2.0
        mid = (t0[-1] + t0[0]) / 2.0
        # periodic interpolation: the samples are one period of the target
        f = lambda x: np.interp(x, t0 - mid, v0, period=2 * half)
        half_period = half
    else:
        f = _FOURIER_TARGETS[args.target]
        half_period = math.pi
    spec = fourier_coefficients(f, half_period, args.order)
    net = build_fourier_net(spec, a=args.a)
    x = np.linspace(-3 * half_period, 3 * half_period, 4001)
    net_y = net.predict_1d(x)
    ps_y = spec.partial_sum(x)
    target_y = np.asarray(f(x), dtype=np.float64)
    max_gap = float(np.abs(net_y - ps_y).max())
    report = {"schema_version": 1, "kind": "verify_fourier", "target": args.target,
              "order": args.order, "a": args.a, "a0": spec.a0,
              "hidden_width": net.widths[1],
              "max_net_vs_partial_sum": max_gap,
              "max_partial_sum_vs_target": float(np.abs(ps_y - target_y).max())}
    Path(args.report).parent.mkdir(parents=True, exist_ok=True)
    Path(args.report).write_text(report_json(report))
    if args.csv_out:
        _write_xy_csv(Path(args.csv_out), ["x", "net", "partial_sum", "target"],
                      [x, net_y, ps_y, target_y])
    print(f"net equals order-{args.order} partial sum to {max_gap:.3e}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snakelab",
        description="Periodic-regression toolkit around the snake activation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default="out")

    p = sub.add_parser("generate", help="write a synthetic task to CSV")
    _add_task_args(p)
    common(p)
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("train", help="train one network on a task")
    _add_task_args(p)
    _add_train_args(p)
    p.add_argument("--activation", default="snake")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--corrected", action="store_true",
                   help="divide snake outputs by sigma_a")
    p.add_argument("--init", choices=INIT_KINDS, default="snake")
    common(p)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("compare", help="compare activations over many runs")
    _add_task_args(p)
    _add_train_args(p)
    p.add_argument("--activations", default="relu,tanh,snake",
                   help="comma-separated kinds")
    p.add_argument("--a", type=float, default=10.0)
    p.add_argument("--runs", type=int, default=21)
    common(p)
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("sweep-a", help="sweep the snake frequency")
    _add_task_args(p)
    _add_train_args(p)
    p.add_argument("--a-values", default="1,16")
    p.add_argument("--runs", type=int, default=5)
    common(p)
    p.set_defaults(fn=cmd_sweep_a)

    p = sub.add_parser("spectrum", help="per-checkpoint output spectrum")
    _add_task_args(p)
    _add_train_args(p)
    p.add_argument("--activation", default="snake")
    p.add_argument("--a", type=float, default=16.0)
    p.add_argument("--corrected", action="store_true")
    p.add_argument("--stride", type=int, default=100)
    common(p)
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("ingest", help="load a CSV time series")
    p.add_argument("--csv", required=True)
    p.add_argument("--time-column", default="t")
    p.add_argument("--value-column", default="value")
    p.add_argument("--resample", choices=("weekly",), default=None)
    common(p)
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("extrapolate", help="probe a model's ray asymptotics")
    p.add_argument("--model", required=True)
    p.add_argument("--rays", type=int, default=20)
    p.add_argument("--zmin", type=_parse_z, default=1.0)
    p.add_argument("--zmax", type=_parse_z, default=2.0 ** 30,
                   help="accepts power notation, e.g. 2^30")
    p.add_argument("--zpoints", type=int, default=64)
    p.add_argument("--report", default="extrapolation.json")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_extrapolate)

    p = sub.add_parser("verify-fourier",
                       help="build an exact Fourier partial-sum network")
    p.add_argument("--target", choices=("square", "saw", "sin_mix", "custom-csv"),
                   default="square")
    p.add_argument("--order", type=int, default=51)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--csv", default=None, help="samples for custom-csv")
    p.add_argument("--time-column", default="t")
    p.add_argument("--value-column", default="value")
    p.add_argument("--csv-out", default=None,
                   help="write (x, net, partial_sum, target) rows here")
    p.add_argument("--report", default="fourier.json")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_verify_fourier)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

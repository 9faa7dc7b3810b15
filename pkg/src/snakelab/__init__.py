"""snakelab: a desk-scale toolkit for learning and analyzing periodic functions.

The package bundles four things that belong together:

* the snake activation x + sin(a x)^2 / a with exact derivatives, its
  variance law under normal inputs, and the sqrt(2)-reduced uniform
  initialization with optional sigma_a output correction;
* a tiny float64 MLP stack (reverse-mode tape, SGD/Adam, binary model files)
  sized for 1-D regression studies;
* analysis labs: ray-asymptotics probes showing that piecewise-linear nets
  extrapolate affinely and saturating nets extrapolate to constants, and an
  exact constructor turning any Fourier partial sum into a snake network;
* an experiment harness for gap-regression comparisons, frequency sweeps,
  and spectral learning trajectories, with deterministic JSON/CSV reports.
"""

from .activations import (Activation, snake, snake_alt, snake_deriv,
                          snake_deriv_a, snake_variance, taylor_coefficients)
from .errors import (CapacityError, ContractError, FormatError, IngestionError,
                     ParameterError, ShapeError, TrainingDivergedError)
from .extrapolation import (Asymptotics, RayProbeReport, classify_asymptotics,
                            extrapolation_mse, probe_ray, random_direction,
                            residual_spectrum)
from .experiments import (SeriesDataset, SyntheticTask, a_sweep,
                          dominant_frequency, fit_task, generate, ingest_csv,
                          noise_sweep, report_json, run_comparison,
                          spectral_trajectory, write_report)
from .fourier import (CosinePair, FourierSpec, bounded_approx_check,
                      build_fourier_net, fourier_coefficients, snake_cos_pair)
from .initialization import InitScheme, init_weights, variance_correction
from .network import (Adam, Mlp, MlpConfig, SGD, TrainConfig, from_bytes,
                      load_model, save_model, to_bytes, train)
from .tape import Tape

__version__ = "0.1.0"

__all__ = [
    "Activation", "snake", "snake_alt", "snake_deriv", "snake_deriv_a",
    "snake_variance", "taylor_coefficients",
    "InitScheme", "init_weights", "variance_correction",
    "Mlp", "MlpConfig", "TrainConfig", "SGD", "Adam", "train",
    "to_bytes", "from_bytes", "save_model", "load_model",
    "Tape",
    "Asymptotics", "RayProbeReport", "probe_ray", "classify_asymptotics",
    "extrapolation_mse", "random_direction", "residual_spectrum",
    "FourierSpec", "CosinePair", "fourier_coefficients", "snake_cos_pair",
    "build_fourier_net", "bounded_approx_check",
    "SyntheticTask", "generate", "fit_task", "run_comparison", "a_sweep",
    "noise_sweep", "spectral_trajectory", "dominant_frequency",
    "SeriesDataset", "ingest_csv", "report_json", "write_report",
    "ShapeError", "ParameterError", "ContractError", "TrainingDivergedError",
    "FormatError", "CapacityError", "IngestionError",
]

"""Feedforward MLPs, optimizers, the training loop, and model serialization.

Layer convention: weight i has shape (d_{i+1}, d_i) -- one row per output
unit, fan-in along columns -- and a batch is (n, d_1), so a layer computes
``x @ W.T + b``.  The activation is applied between layers and never after
the last one; the final layer is a plain affine map.  Biases start at zero.

When the activation is snake, each hidden layer owns its own frequency a.
With ``learnable_a`` the per-layer value is trained in log space (the
parameter is log a), which keeps a positive without any clamping.

Model files are a small versioned binary: magic ``SNKE``, a little-endian
u32 version, an architecture header, then the float64 weights, biases, and
per-layer frequencies in little-endian order.  Round-trips are bit-exact.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from .activations import Activation, KINDS
from .errors import FormatError, ParameterError, ShapeError, TrainingDivergedError
from .initialization import InitScheme, init_weights
from .tape import Tape

MODEL_MAGIC = b"SNKE"
MODEL_VERSION = 2


@dataclass(frozen=True)
class MlpConfig:
    """Architecture: widths d_1..d_{h+1}, activation, init scheme, seed."""

    widths: tuple[int, ...]
    activation: Activation
    init: InitScheme = InitScheme("snake")
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "widths", tuple(int(w) for w in self.widths))
        if len(self.widths) < 2:
            raise ParameterError("need at least an input and an output width")
        if any(w < 1 for w in self.widths):
            raise ParameterError(f"all widths must be >= 1, got {self.widths}")


@dataclass(frozen=True)
class SGD:
    lr: float
    momentum: float = 0.0
    weight_decay: float = 0.0


@dataclass(frozen=True)
class Adam:
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


@dataclass(frozen=True)
class TrainConfig:
    """Loss is always mean squared error.

    ``batch_size=None`` trains on the full batch every step.  The schedule
    is a piecewise-constant list of (step, lr) pairs: from each listed step
    onward the listed rate replaces the optimizer's base rate.
    """

    optimizer: SGD | Adam = field(default_factory=Adam)
    steps: int = 1000
    batch_size: int | None = None
    lr_schedule: tuple[tuple[int, float], ...] = ()
    seed: int = 0

    def __post_init__(self):
        if self.steps < 1:
            raise ParameterError("step budget must be >= 1")
        if self.optimizer.lr <= 0:
            raise ParameterError("learning rate must be positive")
        object.__setattr__(self, "lr_schedule",
                           tuple(sorted((int(s), float(lr)) for s, lr in self.lr_schedule)))

    def lr_at(self, step: int) -> float:
        lr = self.optimizer.lr
        for s, rate in self.lr_schedule:
            if step >= s:
                lr = rate
        return lr


class Mlp:
    """A trained or trainable MLP.  Immutable once training finishes."""

    def __init__(self, widths, activation: Activation, weights, biases,
                 layer_a=None, input_norm=None):
        self.widths = tuple(int(w) for w in widths)
        self.activation = activation
        self.weights = [np.ascontiguousarray(W, dtype=np.float64) for W in weights]
        self.biases = [np.ascontiguousarray(b, dtype=np.float64).reshape(1, -1)
                       for b in biases]
        # per hidden layer frequency; meaningful only for the snake kinds
        if layer_a is None:
            layer_a = [activation.a] * self.n_hidden if activation.is_snake else []
        self.layer_a = [float(a) for a in layer_a]
        self.input_norm = None if input_norm is None else (float(input_norm[0]),
                                                           float(input_norm[1]))
        self._check_shapes()

    # -- construction ----------------------------------------------------

    @classmethod
    def build(cls, config: MlpConfig) -> "Mlp":
        """Initialize weights from the config's scheme and seed; zero biases."""
        act = config.activation
        if config.init.corrects_variance and act.is_snake:
            act = act.with_corrected(True)
        seeds = np.random.SeedSequence(config.seed).spawn(len(config.widths) - 1)
        weights, biases = [], []
        for i in range(len(config.widths) - 1):
            d_in, d_out = config.widths[i], config.widths[i + 1]
            rng = np.random.default_rng(seeds[i])
            weights.append(init_weights(config.init, d_out, d_in, rng))
            biases.append(np.zeros((1, d_out)))
        return cls(config.widths, act, weights, biases)

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    @property
    def n_hidden(self) -> int:
        return len(self.widths) - 2

    def copy(self) -> "Mlp":
        return Mlp(self.widths, self.activation,
                   [W.copy() for W in self.weights],
                   [b.copy() for b in self.biases],
                   list(self.layer_a), self.input_norm)

    def _check_shapes(self):
        for i, (W, b) in enumerate(zip(self.weights, self.biases)):
            want = (self.widths[i + 1], self.widths[i])
            if W.shape != want:
                raise ShapeError(f"layer {i}: weight {W.shape}, expected {want}")
            if b.shape != (1, self.widths[i + 1]):
                raise ShapeError(f"layer {i}: bias {b.shape}, expected "
                                 f"(1, {self.widths[i + 1]})")
        if self.activation.is_snake and len(self.layer_a) != self.n_hidden:
            raise ShapeError(f"{len(self.layer_a)} layer frequencies for "
                             f"{self.n_hidden} hidden layers")

    # -- inference ---------------------------------------------------------

    def _normalize(self, x: np.ndarray) -> np.ndarray:
        if self.input_norm is None:
            return x
        shift, scale = self.input_norm
        return (x - shift) / scale

    def forward(self, x) -> np.ndarray:
        """Batch forward pass; x is (n, d_1), result is (n, d_{h+1})."""
        h = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if h.shape[1] != self.widths[0]:
            raise ShapeError(f"input has {h.shape[1]} columns, "
                             f"network expects {self.widths[0]}")
        h = self._normalize(h)
        for i, (W, b) in enumerate(zip(self.weights, self.biases)):
            z = h @ W.T + b
            if i < self.n_layers - 1:
                a = self.layer_a[i] if self.activation.is_snake else None
                h = self.activation.value(z, a)
            else:
                h = z
        return h

    def __call__(self, x) -> np.ndarray:
        return self.forward(x)

    def predict_1d(self, x) -> np.ndarray:
        """Convenience for d_1 = d_{h+1} = 1 nets: 1-D in, 1-D out."""
        return self.forward(np.asarray(x, dtype=np.float64).reshape(-1, 1)).ravel()

    def hidden_activations(self, x) -> list[np.ndarray]:
        """Post-activation matrices of every hidden layer (for diagnostics)."""
        h = self._normalize(np.atleast_2d(np.asarray(x, dtype=np.float64)))
        out = []
        for i in range(self.n_hidden):
            z = h @ self.weights[i].T + self.biases[i]
            a = self.layer_a[i] if self.activation.is_snake else None
            h = self.activation.value(z, a)
            out.append(h)
        return out

    # -- training ----------------------------------------------------------

    def _taped_forward(self, tape: Tape, x: np.ndarray):
        """Record the forward pass; returns (output node, parameter list).

        The parameter list holds (name, node) pairs covering every weight,
        bias, and -- when a is learnable -- each hidden layer's log a.
        """
        params = []
        h = tape.constant(self._normalize(x))
        learn_a = self.activation.is_snake and self.activation.learnable_a
        for i, (W, b) in enumerate(zip(self.weights, self.biases)):
            Wn = tape.parameter(W)
            bn = tape.parameter(b)
            params.append((f"W{i}", Wn))
            params.append((f"b{i}", bn))
            z = tape.add_bias(tape.matmul(h, Wn, transpose_b=True), bn)
            if i < self.n_layers - 1:
                if learn_a:
                    la = tape.parameter(np.array([[math.log(self.layer_a[i])]]))
                    params.append((f"log_a{i}", la))
                    h = tape.activation(z, self.activation, log_a=la)
                else:
                    a = self.layer_a[i] if self.activation.is_snake else None
                    h = tape.activation(z, self.activation, a=a)
            else:
                h = z
        return h, params

    def loss_and_grads(self, x: np.ndarray, y: np.ndarray):
        """MSE on (x, y) plus gradients keyed like ``_taped_forward`` names."""
        tape = Tape()
        pred, params = self._taped_forward(tape, x)
        loss = tape.mean_square(tape.sub(pred, tape.constant(y)))
        grad_of = tape.backward(loss)
        grads = {name: grad_of[node] for name, node in params}
        return float(loss.value[0, 0]), grads

    def _apply_update(self, name: str, delta: np.ndarray):
        if name.startswith("W"):
            self.weights[int(name[1:])] += delta
        elif name.startswith("b"):
            self.biases[int(name[1:])] += delta
        else:  # log_a: stored as a itself, updated through exp
            i = int(name[5:])
            self.layer_a[i] = float(math.exp(math.log(self.layer_a[i]) + delta[0, 0]))


def train(net: Mlp, data: tuple[np.ndarray, np.ndarray],
          cfg: TrainConfig, on_step=None) -> tuple[Mlp, np.ndarray]:
    """Train in place under mean squared error; returns (net, loss trace).

    The trace holds the batch MSE at every step, evaluated before that
    step's update.  Batch order is derived from ``cfg.seed``, so identical
    seeds give identical runs.  A non-finite loss raises
    :class:`TrainingDivergedError` carrying the step index.  When given,
    ``on_step(step, net)`` is called after each update (e.g. to checkpoint).
    """
    X = np.atleast_2d(np.asarray(data[0], dtype=np.float64))
    Y = np.atleast_2d(np.asarray(data[1], dtype=np.float64))
    if X.shape[0] != Y.shape[0]:
        raise ShapeError(f"X has {X.shape[0]} rows but Y has {Y.shape[0]}")

    opt = cfg.optimizer
    state: dict[str, list[np.ndarray]] = {}
    rng = np.random.default_rng(cfg.seed)
    order = np.arange(X.shape[0])
    cursor = len(order)  # force a reshuffle on first minibatch step
    trace = np.empty(cfg.steps)

    for step in range(cfg.steps):
        if cfg.batch_size is None or cfg.batch_size >= X.shape[0]:
            xb, yb = X, Y
        else:
            if cursor + cfg.batch_size > len(order):
                rng.shuffle(order)
                cursor = 0
            sel = order[cursor:cursor + cfg.batch_size]
            cursor += cfg.batch_size
            xb, yb = X[sel], Y[sel]

        # overflow here is the divergence signal, reported via the exception
        with np.errstate(over="ignore", invalid="ignore"):
            loss, grads = net.loss_and_grads(xb, yb)
        trace[step] = loss
        if not math.isfinite(loss):
            raise TrainingDivergedError(step)

        lr = cfg.lr_at(step)
        for name, g in grads.items():
            if isinstance(opt, SGD):
                if opt.weight_decay and name.startswith("W"):
                    g = g + opt.weight_decay * net.weights[int(name[1:])]
                if opt.momentum:
                    buf = state.setdefault(name, [np.zeros_like(g)])[0]
                    buf *= opt.momentum
                    buf += g
                    g = buf
                net._apply_update(name, -lr * g)
            else:
                m, v = state.setdefault(name, [np.zeros_like(g), np.zeros_like(g)])
                m *= opt.beta1
                m += (1 - opt.beta1) * g
                v *= opt.beta2
                v += (1 - opt.beta2) * g * g
                t = step + 1
                mhat = m / (1 - opt.beta1 ** t)
                vhat = v / (1 - opt.beta2 ** t)
                net._apply_update(name, -lr * mhat / (np.sqrt(vhat) + opt.eps))
        if on_step is not None:
            on_step(step, net)
    return net, trace


# -- serialization ---------------------------------------------------------

_KIND_IDS = {k: i for i, k in enumerate(KINDS)}
_ID_KINDS = {i: k for k, i in _KIND_IDS.items()}


def to_bytes(net: Mlp) -> bytes:
    """Serialize to the versioned little-endian binary format."""
    parts = [MODEL_MAGIC, struct.pack("<I", MODEL_VERSION)]
    parts.append(struct.pack("<I", len(net.widths)))
    parts.append(struct.pack(f"<{len(net.widths)}I", *net.widths))
    act = net.activation
    parts.append(struct.pack("<BddBB", _KIND_IDS[act.kind], act.a, act.slope,
                             int(act.learnable_a), int(act.corrected)))
    if net.input_norm is None:
        parts.append(struct.pack("<B", 0))
    else:
        parts.append(struct.pack("<Bdd", 1, *net.input_norm))
    parts.append(struct.pack("<I", len(net.layer_a)))
    if net.layer_a:
        parts.append(struct.pack(f"<{len(net.layer_a)}d", *net.layer_a))
    for W, b in zip(net.weights, net.biases):
        parts.append(np.ascontiguousarray(W, dtype="<f8").tobytes())
        parts.append(np.ascontiguousarray(b, dtype="<f8").tobytes())
    return b"".join(parts)


class _Reader:
    def __init__(self, blob: bytes):
        self.blob = blob
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.blob):
            raise FormatError(f"model blob truncated at byte {self.pos} "
                              f"(needed {n} more)")
        out = self.blob[self.pos:self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def floats(self, n: int) -> np.ndarray:
        return np.frombuffer(self.take(8 * n), dtype="<f8").astype(np.float64)


def from_bytes(blob: bytes) -> Mlp:
    """Load a model blob; older minor versions load with defaulted fields."""
    r = _Reader(blob)
    if r.take(4) != MODEL_MAGIC:
        raise FormatError("bad magic bytes: not a model file")
    (version,) = r.unpack("<I")
    if not 1 <= version <= MODEL_VERSION:
        raise FormatError(f"unsupported model version {version} "
                          f"(this build reads 1..{MODEL_VERSION})")
    (nw,) = r.unpack("<I")
    if not 2 <= nw <= 10_000:
        raise FormatError(f"implausible width count {nw}")
    widths = r.unpack(f"<{nw}I")
    kind_id, a, slope, learnable, corrected = r.unpack("<BddBB")
    if kind_id not in _ID_KINDS:
        raise FormatError(f"unknown activation id {kind_id}")
    act = Activation(_ID_KINDS[kind_id], a=a, slope=slope,
                     learnable_a=bool(learnable), corrected=bool(corrected))
    input_norm = None
    if version >= 2:  # v1 files predate input normalization
        (has_norm,) = r.unpack("<B")
        if has_norm:
            input_norm = r.unpack("<dd")
    (n_a,) = r.unpack("<I")
    layer_a = list(r.floats(n_a)) if n_a else []
    weights, biases = [], []
    for i in range(nw - 1):
        d_in, d_out = widths[i], widths[i + 1]
        weights.append(r.floats(d_out * d_in).reshape(d_out, d_in))
        biases.append(r.floats(d_out).reshape(1, d_out))
    if r.pos != len(blob):
        raise FormatError(f"{len(blob) - r.pos} trailing bytes after model data")
    return Mlp(widths, act, weights, biases,
               layer_a if act.is_snake else None, input_norm)


def save_model(net: Mlp, path) -> None:
    with open(path, "wb") as f:
        f.write(to_bytes(net))


def load_model(path) -> Mlp:
    with open(path, "rb") as f:
        return from_bytes(f.read())

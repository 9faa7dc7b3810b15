"""Dense float64 matrices and a define-by-run reverse-mode gradient tape.

Every value handled here is a 2-D, C-contiguous float64 ndarray ("matrix"):
weight matrices, bias rows (1 x k), data batches (n x d), and scalar losses
(1 x 1).  The tape records one node per primitive operation in creation
order, which is a valid topological order, so the backward pass simply walks
the record in reverse.  A fresh tape is built for every training step;
nothing here is reused across steps.

The primitive set is intentionally small: matmul (with an optional
transpose of the right operand), bias addition broadcast over batch rows,
elementwise subtraction, elementwise activation, and mean-of-squares
reduction.  That is exactly enough to train an MLP under squared error.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import ContractError, ShapeError


def as_matrix(x) -> np.ndarray:
    """Coerce input to a 2-D float64 C-order array, copying only if needed."""
    a = np.ascontiguousarray(x, dtype=np.float64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got ndim={a.ndim}")
    return a


class Node:
    """One recorded value in the computation graph."""

    __slots__ = ("value", "op", "parents", "vjps", "fwd", "grad")

    def __init__(self, value, op, parents=(), vjps=(), fwd=None):
        self.value: np.ndarray = value
        self.op: str = op
        self.parents: tuple[Node, ...] = parents
        self.vjps: tuple[Callable, ...] = vjps
        self.fwd = fwd  # recomputes value from parent values; None for leaves
        self.grad: np.ndarray | None = None

    @property
    def shape(self):
        return self.value.shape


class Tape:
    """Ordered record of primitive ops supporting a single backward pass."""

    def __init__(self):
        self.nodes: list[Node] = []

    # -- leaves ---------------------------------------------------------

    def parameter(self, value) -> Node:
        """Record a trainable leaf. `backward` returns gradients for these."""
        return self._record(as_matrix(value), "parameter")

    def constant(self, value) -> Node:
        """Record a non-trainable leaf (inputs, targets)."""
        return self._record(as_matrix(value), "constant")

    # -- primitives -----------------------------------------------------

    def matmul(self, a: Node, b: Node, transpose_b: bool = False) -> Node:
        """Matrix product a @ b, or a @ b.T when transpose_b is set."""
        k_a = a.shape[1]
        k_b = b.shape[1] if transpose_b else b.shape[0]
        if k_a != k_b:
            op = "@ b.T" if transpose_b else "@ b"
            raise ShapeError(f"matmul: a{a.shape} {op}{b.shape} "
                             f"(inner dimensions {k_a} != {k_b})")
        if transpose_b:
            fwd = lambda av, bv: av @ bv.T
            vjps = (lambda g: g @ b.value, lambda g: g.T @ a.value)
        else:
            fwd = lambda av, bv: av @ bv
            vjps = (lambda g: g @ b.value.T, lambda g: a.value.T @ g)
        return self._record(fwd(a.value, b.value), "matmul", (a, b), vjps, fwd)

    def add_bias(self, x: Node, b: Node) -> Node:
        """Add a (1 x k) bias row to every row of the (n x k) batch."""
        if b.shape != (1, x.shape[1]):
            raise ShapeError(f"add_bias: bias{b.shape} does not broadcast over "
                             f"batch{x.shape}; expected (1, {x.shape[1]})")
        fwd = lambda xv, bv: xv + bv
        vjps = (lambda g: g, lambda g: g.sum(axis=0, keepdims=True))
        return self._record(fwd(x.value, b.value), "add_bias", (x, b), vjps, fwd)

    def sub(self, a: Node, b: Node) -> Node:
        if a.shape != b.shape:
            raise ShapeError(f"sub: {a.shape} != {b.shape}")
        fwd = lambda av, bv: av - bv
        vjps = (lambda g: g, lambda g: -g)
        return self._record(fwd(a.value, b.value), "sub", (a, b), vjps, fwd)

    def activation(self, x: Node, act, a: float | None = None,
                   log_a: Node | None = None) -> Node:
        """Apply an elementwise activation; optionally route gradient to log(a).

        When `log_a` is given it must be a (1 x 1) parameter holding the log
        of the activation's frequency; the frequency used in the forward pass
        is exp(log_a) and receives a chain-rule gradient through it.
        """
        if log_a is not None:
            if log_a.shape != (1, 1):
                raise ShapeError(f"log_a must be (1, 1), got {log_a.shape}")
            a = float(np.exp(log_a.value[0, 0]))
        value, dvalue_dx = act.value_and_grad(x.value, a)
        vjps = [lambda g: g * dvalue_dx]
        parents = [x]
        if log_a is not None:
            da = act.grad_a(x.value, a)
            # d/d(log a) = a * d/da
            vjps.append(lambda g: np.array([[float((g * da).sum()) * a]]))
            parents.append(log_a)
        fwd = lambda xv, *rest: act.value(xv, a)
        return self._record(value, "activation", tuple(parents), tuple(vjps), fwd)

    def mean_square(self, x: Node) -> Node:
        """Mean of squared entries, as a (1 x 1) scalar."""
        fwd = lambda xv: np.array([[float(np.mean(xv * xv))]])
        vjps = (lambda g: (2.0 * g[0, 0] / x.value.size) * x.value,)
        return self._record(fwd(x.value), "mean_square", (x,), vjps, fwd)

    # -- engine ---------------------------------------------------------

    def backward(self, loss: Node) -> dict[Node, np.ndarray]:
        """Reverse pass from a scalar loss; returns {parameter node: gradient}.

        Gradients have the shape of their parameter.  Nodes recorded after
        the loss receive no adjoint and are skipped.
        """
        if loss.shape != (1, 1):
            raise ContractError(f"loss must be a 1x1 scalar, got {loss.shape}")
        for node in self.nodes:
            node.grad = None
        loss.grad = np.ones((1, 1))
        for node in reversed(self.nodes):
            if node.grad is None:
                continue
            for parent, vjp in zip(node.parents, node.vjps):
                contrib = vjp(node.grad)
                if parent.grad is None:
                    parent.grad = np.zeros_like(parent.value)
                parent.grad = parent.grad + contrib
        # parameters the loss never touched get exact zeros
        return {n: (n.grad if n.grad is not None else np.zeros_like(n.value))
                for n in self.nodes if n.op == "parameter"}

    def replay(self) -> None:
        """Recompute every recorded op and require bit-identical outputs."""
        for node in self.nodes:
            if node.fwd is None:
                continue
            redo = node.fwd(*(p.value for p in node.parents))
            if redo.shape != node.value.shape or not np.array_equal(redo, node.value):
                raise AssertionError(f"replay mismatch in op {node.op!r}")

    def _record(self, value, op, parents=(), vjps=(), fwd=None) -> Node:
        node = Node(value, op, parents, vjps, fwd)
        self.nodes.append(node)
        return node

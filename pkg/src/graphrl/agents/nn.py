"""A small dense network with hand-written backprop, and Adam."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class LayerSpec:
    input_size: int
    output_size: int
    activation: str | None = None  # "relu" or None
    dropout: float = 0.0

    def __post_init__(self):
        if self.input_size < 1 or self.output_size < 1:
            raise ValueError("layer sizes must be positive")
        if self.activation not in (None, "relu"):
            raise ValueError(f"unsupported activation {self.activation!r}")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError(f"dropout must lie in [0, 1), got {self.dropout}")


def mlp_specs(sizes: Sequence[int], dropout: float = 0.0) -> list[LayerSpec]:
    """ReLU + dropout after every hidden layer, plain linear output."""
    sizes = [int(s) for s in sizes]
    if len(sizes) < 2:
        raise ValueError("need at least an input and an output size")
    last = len(sizes) - 2
    return [
        LayerSpec(sizes[i], sizes[i + 1], None if i == last else "relu", 0.0 if i == last else dropout)
        for i in range(len(sizes) - 1)
    ]


class Network:
    """Feed-forward net.  ``forward`` caches what ``backward`` needs.

    Weights are ``(in, out)`` so a batch multiplies on the right.  Dropout
    uses inverted scaling and is active only in train mode; the masks drawn
    by a forward pass are reused by the following backward pass.
    """

    def __init__(self, layers: Sequence[LayerSpec], rng: np.random.Generator | None = None):
        layers = list(layers)
        if not layers:
            raise ValueError("a network needs at least one layer")
        for a, b in zip(layers, layers[1:]):
            if a.output_size != b.input_size:
                raise ValueError(f"layer sizes do not chain: {a.output_size} -> {b.input_size}")
        self.layers = layers
        self.training = False
        self.weights: list[np.ndarray] = []
        self.biases: list[np.ndarray] = []
        self._cache = None
        self.initialize(rng if rng is not None else np.random.default_rng())

    @classmethod
    def from_sizes(cls, sizes: Sequence[int], dropout: float = 0.0, rng=None) -> "Network":
        return cls(mlp_specs(sizes, dropout), rng)

    @property
    def input_size(self) -> int:
        return self.layers[0].input_size

    @property
    def output_size(self) -> int:
        return self.layers[-1].output_size

    def initialize(self, rng: np.random.Generator) -> None:
        """Glorot-uniform weights, zero biases."""
        self.weights, self.biases = [], []
        for spec in self.layers:
            bound = np.sqrt(6.0 / (spec.input_size + spec.output_size))
            self.weights.append(rng.uniform(-bound, bound, size=(spec.input_size, spec.output_size)))
            self.biases.append(np.zeros(spec.output_size))
        self._cache = None

    def parameters(self) -> list[np.ndarray]:
        out = []
        for w, b in zip(self.weights, self.biases):
            out += [w, b]
        return out

    def set_parameters(self, params: Sequence[np.ndarray]) -> None:
        params = list(params)
        self.weights = [np.array(p, dtype=np.float64) for p in params[0::2]]
        self.biases = [np.array(p, dtype=np.float64) for p in params[1::2]]

    def copy_parameters(self) -> list[np.ndarray]:
        return [p.copy() for p in self.parameters()]

    def train(self) -> "Network":
        self.training = True
        return self

    def eval(self) -> "Network":
        self.training = False
        return self

    def forward(self, x, rng: np.random.Generator | None = None) -> np.ndarray:
        h = np.asarray(x, dtype=np.float64)
        if h.ndim != 2 or h.shape[1] != self.input_size:
            raise ValueError(f"expected input of shape (batch, {self.input_size}), got {h.shape}")
        cache = []
        for spec, w, b in zip(self.layers, self.weights, self.biases):
            inp = h
            z = inp @ w + b
            h = np.maximum(z, 0.0) if spec.activation == "relu" else z
            mask = None
            if self.training and spec.dropout > 0.0:
                if rng is None:
                    raise ValueError("dropout in train mode needs a random generator")
                keep = 1.0 - spec.dropout
                mask = (rng.random(h.shape) < keep) / keep
                h = h * mask
            cache.append((inp, z, mask))
        self._cache = cache
        return h

    __call__ = forward

    def predictor(self, dtype=np.float32):
        """Snapshot of the current weights as a cache-free eval-mode function."""
        layers = [(spec.activation, w.astype(dtype), b.astype(dtype))
                  for spec, w, b in zip(self.layers, self.weights, self.biases)]

        def predict(x) -> np.ndarray:
            h = np.asarray(x, dtype=dtype)
            for activation, w, b in layers:
                h = h @ w + b
                if activation == "relu":
                    np.maximum(h, 0, out=h)
            return h

        return predict

    def backward(self, grad_out: np.ndarray) -> list[np.ndarray]:
        """Gradients for ``parameters()`` given d(loss)/d(output) of the last forward."""
        if self._cache is None:
            raise RuntimeError("backward called without a preceding forward")
        g = np.asarray(grad_out, dtype=np.float64)
        grads: list[np.ndarray] = []
        for spec, w, (inp, z, mask) in zip(reversed(self.layers), reversed(self.weights), reversed(self._cache)):
            if mask is not None:
                g = g * mask
            if spec.activation == "relu":
                g = g * (z > 0.0)
            grads.append(g.sum(axis=0))
            grads.append(inp.T @ g)
            g = g @ w.T
        grads.reverse()
        return grads


class Adam:
    """Bias-corrected adaptive moment estimation over a list of arrays."""

    def __init__(self, params: Sequence[np.ndarray], lr: float = 0.003, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.params = list(params)
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m = [np.zeros_like(p) for p in self.params]
        self.v = [np.zeros_like(p) for p in self.params]
        self.t = 0

    def step(self, grads: Sequence[np.ndarray]) -> None:
        grads = list(grads)
        if len(grads) != len(self.params):
            raise ValueError("gradient list does not match parameters")
        self.t += 1
        c1 = 1.0 - self.beta1 ** self.t
        c2 = 1.0 - self.beta2 ** self.t
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            if g.shape != p.shape:
                raise ValueError(f"gradient shape {g.shape} does not match parameter {p.shape}")
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)

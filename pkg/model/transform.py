"""
Per-relation transform f_e: R^d -> R^d.

A small multilayer network d -> h -> ... -> h -> d with ReLU between layers
and a linear output layer. Weights are stored (in, out) and inputs are row
vectors, so a layer computes z = a @ W + b on a batch.
"""
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from utils.exceptions import DimensionMismatchError


@dataclass
class TransformCache:
    """Intermediates of one forward pass through a transform."""
    inputs: List[np.ndarray] = field(default_factory=list)
    pre_activations: List[np.ndarray] = field(default_factory=list)

    @property
    def layers(self) -> int:
        return len(self.pre_activations)


@dataclass
class TransformGradient:
    """Gradients for every weight matrix and bias vector of one transform."""
    weights: List[np.ndarray]
    biases: List[np.ndarray]

    def add_(self, other: 'TransformGradient') -> 'TransformGradient':
        """Accumulate another gradient in place."""
        for mine, theirs in zip(self.weights, other.weights):
            mine += theirs
        for mine, theirs in zip(self.biases, other.biases):
            mine += theirs
        return self

    def squared_norm(self) -> float:
        return float(sum(np.sum(g * g) for g in self.weights) + sum(np.sum(g * g) for g in self.biases))


class RelationTransform:
    """Trainable multilayer function for one edge type."""

    def __init__(self, weights: Sequence[np.ndarray], biases: Sequence[np.ndarray]):
        """
        Wrap existing parameter arrays (not copied).

        Args:
            weights: Matrices of shape (in, out); first input and last output width must match
            biases: Vectors of shape (out,)
        """
        if not weights or len(weights) != len(biases):
            raise ValueError("transform needs one bias per weight matrix and at least one layer")
        for index, (w, b) in enumerate(zip(weights, biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise ValueError(f"layer {index + 1}: weight {w.shape} and bias {b.shape} do not match")
            if index and weights[index - 1].shape[1] != w.shape[0]:
                raise ValueError(f"layer {index + 1}: input width {w.shape[0]} != previous output {weights[index - 1].shape[1]}")
        if weights[0].shape[0] != weights[-1].shape[1]:
            raise ValueError("transform input and output widths must both equal the embedding dimension")
        self.weights: List[np.ndarray] = list(weights)
        self.biases: List[np.ndarray] = list(biases)

    @classmethod
    def initialize(
        cls,
        dim: int,
        hidden: int,
        hidden_layers: int,
        rng: np.random.Generator,
        dtype=np.float32
    ) -> 'RelationTransform':
        """
        He-scaled Gaussian weights, zero biases.

        Args:
            dim: Embedding dimension d (input and output width)
            hidden: Hidden width h
            hidden_layers: Number of hidden layers (2 gives the d-h-h-d module)
            rng: Random generator
            dtype: Parameter dtype
        """
        widths = [dim] + [hidden] * hidden_layers + [dim]
        weights = [
            (rng.standard_normal((fan_in, fan_out)) * np.sqrt(2.0 / fan_in)).astype(dtype)
            for fan_in, fan_out in zip(widths[:-1], widths[1:])
        ]
        biases = [np.zeros(fan_out, dtype=dtype) for fan_out in widths[1:]]
        return cls(weights, biases)

    @property
    def dim(self) -> int:
        return self.weights[0].shape[0]

    @property
    def widths(self) -> List[int]:
        return [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]

    @property
    def num_layers(self) -> int:
        return len(self.weights)

    @property
    def dtype(self):
        return self.weights[0].dtype

    def parameters(self) -> List[Tuple[str, np.ndarray]]:
        """Named parameter arrays (W1, b1, W2, ...)."""
        named = []
        for index, (w, b) in enumerate(zip(self.weights, self.biases), start=1):
            named.append((f"W{index}", w))
            named.append((f"b{index}", b))
        return named

    def forward(self, x: np.ndarray) -> Tuple[np.ndarray, TransformCache]:
        """
        Apply the transform to a batch.

        Args:
            x: Array of shape (B, d)

        Returns:
            Output (B, d) and the cache needed for backward
        """
        if x.ndim != 2 or x.shape[1] != self.dim:
            raise DimensionMismatchError(f"transform expects (B, {self.dim}) input, got {x.shape}")
        cache = TransformCache()
        a = x
        last = self.num_layers - 1
        for index, (w, b) in enumerate(zip(self.weights, self.biases)):
            cache.inputs.append(a)
            z = a @ w + b
            cache.pre_activations.append(z)
            a = np.maximum(z, 0) if index < last else z
        return a, cache

    def backward(self, cache: TransformCache, grad_output: np.ndarray) -> Tuple[np.ndarray, TransformGradient]:
        """
        Backpropagate through the transform.

        ReLU has subgradient 0 at exactly 0.

        Args:
            cache: Cache from the matching forward call
            grad_output: dLoss/dOutput, shape (B, d)

        Returns:
            dLoss/dInput and the parameter gradients
        """
        grad_w: List[np.ndarray] = [None] * self.num_layers
        grad_b: List[np.ndarray] = [None] * self.num_layers
        delta = grad_output
        for index in range(self.num_layers - 1, -1, -1):
            grad_w[index] = cache.inputs[index].T @ delta
            grad_b[index] = delta.sum(axis=0)
            delta = delta @ self.weights[index].T
            if index > 0:
                delta = delta * (cache.pre_activations[index - 1] > 0)
        return delta, TransformGradient(grad_w, grad_b)

    def zero_gradient(self) -> TransformGradient:
        """Gradient of zeros with this transform's shapes."""
        return TransformGradient([np.zeros_like(w) for w in self.weights], [np.zeros_like(b) for b in self.biases])

    def copy(self) -> 'RelationTransform':
        return RelationTransform([w.copy() for w in self.weights], [b.copy() for b in self.biases])

"""
Relation-chain composition (dynamic computation graph).

A chain signature (e_1, ..., e_m) composes f_{e_m}(...relu(f_{e_1}(x))...):
ReLU at every module junction, linear final output. Evaluators are built on
demand and memoized per signature; all of them share the per-relation
transform objects, so one parameter set exists per edge type.
"""
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from model.transform import RelationTransform, TransformCache, TransformGradient
from utils.exceptions import ChainLengthError, EdgeTypeLookupError

Signature = Tuple[int, ...]


@dataclass
class ForwardTape:
    """Everything recorded by one composed forward pass (and the loss on top of it)."""
    pass_id: int
    signature: Signature
    inputs: np.ndarray
    module_caches: List[TransformCache] = field(default_factory=list)
    module_outputs: List[np.ndarray] = field(default_factory=list)
    output: Optional[np.ndarray] = None
    # Filled in by the loss
    sources: Optional[np.ndarray] = None
    targets: Optional[np.ndarray] = None
    negatives: Optional[np.ndarray] = None
    target_vectors: Optional[np.ndarray] = None
    negative_vectors: Optional[np.ndarray] = None
    pos_scores: Optional[np.ndarray] = None
    neg_scores: Optional[np.ndarray] = None

    @property
    def layer_count(self) -> int:
        """Total layers recorded across all modules of the chain."""
        return sum(cache.layers for cache in self.module_caches)


class ChainEvaluator:
    """Composed forward/backward for one signature."""

    def __init__(self, signature: Signature, transforms: Sequence[RelationTransform]):
        self.signature = signature
        self.transforms = list(transforms)

    def forward(self, x: np.ndarray, pass_id: int = 0) -> Tuple[np.ndarray, ForwardTape]:
        """
        Run the chain on a batch of source vectors.

        Args:
            x: Array (B, d)
            pass_id: Parameter version the pass was recorded under

        Returns:
            Output (B, d) and its tape
        """
        tape = ForwardTape(pass_id=pass_id, signature=self.signature, inputs=x)
        a = x
        last = len(self.transforms) - 1
        for index, transform in enumerate(self.transforms):
            y, cache = transform.forward(a)
            tape.module_caches.append(cache)
            tape.module_outputs.append(y)
            a = np.maximum(y, 0) if index < last else y
        tape.output = a
        return a, tape

    def backward(self, tape: ForwardTape, grad_output: np.ndarray) -> Tuple[np.ndarray, Dict[int, TransformGradient]]:
        """
        Backpropagate through the chain.

        A relation used at several positions receives the sum of its gradients.

        Returns:
            dLoss/dInput and gradients keyed by edge type id
        """
        grads: Dict[int, TransformGradient] = {}
        delta = grad_output
        for index in range(len(self.transforms) - 1, -1, -1):
            if index < len(self.transforms) - 1:
                delta = delta * (tape.module_outputs[index] > 0)
            delta, grad = self.transforms[index].backward(tape.module_caches[index], delta)
            edge_type = self.signature[index]
            if edge_type in grads:
                grads[edge_type].add_(grad)
            else:
                grads[edge_type] = grad
        return delta, grads


def enumerate_signatures(edge_types: Iterable[int], max_chain_length: int) -> List[Signature]:
    """
    All relation chains of length 1..c over the edge types, shortest first.

    |L| + |L|^2 + ... + |L|^c signatures.
    """
    edge_types = list(edge_types)
    signatures: List[Signature] = []
    for length in range(1, max_chain_length + 1):
        signatures.extend(product(edge_types, repeat=length))
    return signatures


class ChainComposer:
    """Builds and memoizes one evaluator per signature."""

    def __init__(self, transforms: Mapping[int, RelationTransform], max_chain_length: int):
        if max_chain_length < 1:
            raise ChainLengthError(f"max chain length must be >= 1, got {max_chain_length}")
        self.transforms = transforms
        self.max_chain_length = max_chain_length
        self._cache: Dict[Signature, ChainEvaluator] = {}

    def compose_lazy(self, signature: Sequence[int]) -> ChainEvaluator:
        """
        Evaluator for a signature, built on first request.

        Raises:
            ChainLengthError: Empty chain or longer than c
            EdgeTypeLookupError: Relation without a transform
        """
        key = tuple(int(e) for e in signature)
        evaluator = self._cache.get(key)
        if evaluator is not None:
            return evaluator
        if not 1 <= len(key) <= self.max_chain_length:
            raise ChainLengthError(f"chain of length {len(key)} outside 1..{self.max_chain_length}")
        missing = [e for e in key if e not in self.transforms]
        if missing:
            raise EdgeTypeLookupError(f"no transform for edge type(s) {missing}")
        evaluator = ChainEvaluator(key, [self.transforms[e] for e in key])
        self._cache[key] = evaluator
        return evaluator

    def build_all(self) -> Dict[Signature, ChainEvaluator]:
        """Construct the evaluator for every signature up to c (the full set S)."""
        for signature in enumerate_signatures(sorted(self.transforms), self.max_chain_length):
            self.compose_lazy(signature)
        return dict(self._cache)

    def __len__(self) -> int:
        return len(self._cache)

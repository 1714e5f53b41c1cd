"""
Signature-homogeneous mini-batching.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from sampler.records import ChainSample

Signature = Tuple[int, ...]
SeedLike = Union[int, Sequence[int], np.random.Generator]


@dataclass
class Batch:
    """Up to b samples sharing one relation chain."""
    signature: Signature
    sources: np.ndarray
    targets: np.ndarray
    negatives: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return int(self.sources.shape[0])


class SignatureGroups:
    """Samples grouped by signature, in order of first appearance."""

    def __init__(self, samples: Iterable[ChainSample]):
        firsts: Dict[Signature, List[int]] = {}
        lasts: Dict[Signature, List[int]] = {}
        for sample in samples:
            firsts.setdefault(sample.relations, []).append(sample.first)
            lasts.setdefault(sample.relations, []).append(sample.last)
        self.signatures: List[Signature] = list(firsts)
        self.sources = {sig: np.array(firsts[sig], dtype=np.int64) for sig in self.signatures}
        self.targets = {sig: np.array(lasts[sig], dtype=np.int64) for sig in self.signatures}

    @property
    def num_samples(self) -> int:
        return sum(a.size for a in self.sources.values())

    def __len__(self) -> int:
        return len(self.signatures)

    def batches(self, batch_size: int, rng: np.random.Generator) -> List[Batch]:
        """
        One epoch of batches.

        Signature groups are visited in shuffled order; samples are shuffled
        within each group and cut into batches of at most `batch_size`.
        """
        out: List[Batch] = []
        for group in rng.permutation(len(self.signatures)):
            sig = self.signatures[group]
            order = rng.permutation(self.sources[sig].size)
            sources, targets = self.sources[sig][order], self.targets[sig][order]
            for start in range(0, order.size, batch_size):
                out.append(Batch(sig, sources[start:start + batch_size], targets[start:start + batch_size]))
        return out


def make_batches(samples: Iterable[ChainSample] | SignatureGroups, batch_size: int, seed: SeedLike) -> List[Batch]:
    """
    Shuffle samples into signature-homogeneous batches.

    Args:
        samples: Chain samples (or pre-built groups)
        batch_size: Max batch size b
        seed: Seed, seed sequence or generator

    Returns:
        Batches covering every sample exactly once
    """
    if batch_size < 1:
        raise ValueError(f"batch size must be >= 1, got {batch_size}")
    groups = samples if isinstance(samples, SignatureGroups) else SignatureGroups(samples)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return groups.batches(batch_size, rng)

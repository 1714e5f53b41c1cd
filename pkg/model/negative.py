"""
Negative sampling noise distribution.

Nodes are drawn from a cumulative table with binary search: endpoint
frequency raised to 0.75 (unigram) or uniform. Optionally negatives come
only from the node type of the positive target.
"""
from typing import Dict, Iterable, Optional

import numpy as np

from sampler.records import ChainSample
from sampler.corpus import endpoint_counts

UNIGRAM_POWER = 0.75


class NegSampler:
    """Draws (B, neg) negative node ids."""

    def __init__(self, probabilities: np.ndarray, neg: int, node_type_ids: Optional[np.ndarray] = None):
        """
        Args:
            probabilities: Noise distribution over all nodes (normalized here)
            neg: Negatives per positive
            node_type_ids: When given, draw negatives from the target's node type
        """
        probabilities = np.asarray(probabilities, dtype=np.float64)
        total = probabilities.sum()
        if total <= 0:
            probabilities = np.ones_like(probabilities)
            total = probabilities.sum()
        self.probabilities = probabilities / total
        self.neg = neg
        self._cum_table = np.cumsum(self.probabilities)
        self._typed: Optional[Dict[int, tuple]] = None
        self._node_type_ids = node_type_ids
        if node_type_ids is not None:
            self._typed = {}
            for node_type in np.unique(node_type_ids):
                members = np.flatnonzero(node_type_ids == node_type)
                mass = self.probabilities[members]
                if mass.sum() > 0:
                    self._typed[int(node_type)] = (members, np.cumsum(mass))

    @classmethod
    def from_samples(
        cls,
        samples: Iterable[ChainSample],
        num_nodes: int,
        neg: int,
        noise: str = 'unigram',
        node_type_ids: Optional[np.ndarray] = None
    ) -> 'NegSampler':
        """Build the noise distribution from sample endpoint counts."""
        if noise == 'uniform':
            return cls(np.ones(num_nodes), neg, node_type_ids)
        counts = np.zeros(num_nodes, dtype=np.float64)
        for node, count in endpoint_counts(samples).items():
            counts[node] = count
        return cls(counts ** UNIGRAM_POWER, neg, node_type_ids)

    @staticmethod
    def _search(cum_table: np.ndarray, rng: np.random.Generator, size) -> np.ndarray:
        draws = np.searchsorted(cum_table, rng.random(size) * cum_table[-1], side='right')
        return np.minimum(draws, cum_table.size - 1)

    def draw(self, rng: np.random.Generator, targets: np.ndarray) -> np.ndarray:
        """
        Negatives for a batch.

        Args:
            rng: Random generator
            targets: Positive targets (B,); used for typed draws

        Returns:
            Int64 array (B, neg)
        """
        targets = np.asarray(targets)
        batch = targets.shape[0]
        if self._typed is None:
            return self._search(self._cum_table, rng, (batch, self.neg)).astype(np.int64)

        out = np.empty((batch, self.neg), dtype=np.int64)
        target_types = self._node_type_ids[targets]
        for node_type in np.unique(target_types):
            rows = np.flatnonzero(target_types == node_type)
            table = self._typed.get(int(node_type))
            if table is None:
                out[rows] = self._search(self._cum_table, rng, (rows.size, self.neg))
            else:
                members, cum_table = table
                out[rows] = members[self._search(cum_table, rng, (rows.size, self.neg))]
        return out

"""
HIN embedding model: embedding table, one transform per edge type, chain
scoring, negative-sampling loss and exact gradients.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.constants import SCORE_CLAMP
from model.chain import ChainComposer, ChainEvaluator, ForwardTape
from model.embedding import EmbeddingTable
from model.transform import RelationTransform, TransformGradient
from sampler.records import ChainSample
from utils.exceptions import DimensionMismatchError, NodeLookupError, StaleTapeError


def softplus(x: np.ndarray) -> np.ndarray:
    """log(1 + exp(x)) without overflow."""
    return np.logaddexp(0, x)


def sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


@dataclass
class Gradients:
    """Sparse embedding gradient (unique rows) plus per-edge-type transform gradients."""
    rows: np.ndarray
    embedding: np.ndarray
    transforms: Dict[int, TransformGradient] = field(default_factory=dict)

    def dense_embedding(self, num_nodes: int) -> np.ndarray:
        """Full |V| x d gradient, zero outside the touched rows."""
        dense = np.zeros((num_nodes, self.embedding.shape[1]), dtype=self.embedding.dtype)
        dense[self.rows] = self.embedding
        return dense

    def global_norm(self) -> float:
        total = float(np.sum(self.embedding * self.embedding))
        total += sum(g.squared_norm() for g in self.transforms.values())
        return float(np.sqrt(total))


class HineModel:
    """Parameter store and differentiable core."""

    def __init__(
        self,
        embeddings: EmbeddingTable,
        transforms: Dict[int, RelationTransform],
        max_chain_length: int,
        edge_type_names: Optional[Sequence[str]] = None
    ):
        for e, transform in transforms.items():
            if transform.dim != embeddings.dim:
                raise DimensionMismatchError(f"transform {e} width {transform.dim} != embedding dim {embeddings.dim}")
        self.embeddings = embeddings
        self.transforms = transforms
        self.max_chain_length = max_chain_length
        self.edge_type_names = list(edge_type_names) if edge_type_names is not None else [str(e) for e in sorted(transforms)]
        self.composer = ChainComposer(transforms, max_chain_length)
        # Bumped on every parameter update; tapes remember the value they saw
        self.version = 0

    @classmethod
    def initialize(
        cls,
        num_nodes: int,
        num_edge_types: int,
        dim: int,
        hidden: int,
        hidden_layers: int = 2,
        max_chain_length: int = 3,
        seed: int = 0,
        dtype: str = 'float32',
        node_names: Optional[Sequence[str]] = None,
        edge_type_names: Optional[Sequence[str]] = None
    ) -> 'HineModel':
        """
        Fresh model. Φ is drawn first, then transforms in edge type order, all from one seeded generator.
        """
        rng = np.random.default_rng(seed)
        embeddings = EmbeddingTable.initialize(num_nodes, dim, rng, dtype=dtype, names=node_names)
        transforms = {
            e: RelationTransform.initialize(dim, hidden, hidden_layers, rng, dtype=dtype)
            for e in range(num_edge_types)
        }
        return cls(embeddings, transforms, max_chain_length, edge_type_names)

    @classmethod
    def for_graph(cls, graph, config) -> 'HineModel':
        """Model sized for a graph from a TrainConfig."""
        return cls.initialize(
            num_nodes=graph.num_nodes,
            num_edge_types=len(graph.edge_types),
            dim=config.dim,
            hidden=config.hidden,
            hidden_layers=config.hidden_layers,
            max_chain_length=config.max_chain_length,
            seed=config.seed,
            dtype=config.dtype,
            node_names=graph.nodes.names,
            edge_type_names=graph.edge_types.names,
        )

    @property
    def phi(self) -> np.ndarray:
        return self.embeddings.vectors

    @property
    def dim(self) -> int:
        return self.embeddings.dim

    @property
    def num_nodes(self) -> int:
        return len(self.embeddings)

    @property
    def dtype(self):
        return self.phi.dtype

    def edge_type_name(self, e: int) -> str:
        return self.edge_type_names[e] if 0 <= e < len(self.edge_type_names) else str(e)

    def parameter_blocks(self) -> List[Tuple[str, np.ndarray]]:
        """Every parameter array with a diagnostic name."""
        blocks = [('embedding', self.phi)]
        for e in sorted(self.transforms):
            for name, array in self.transforms[e].parameters():
                blocks.append((f"transform[{self.edge_type_name(e)}].{name}", array))
        return blocks

    def compose_lazy(self, signature: Sequence[int]) -> ChainEvaluator:
        return self.composer.compose_lazy(signature)

    def _check_nodes(self, *ids: np.ndarray) -> None:
        for array in ids:
            array = np.asarray(array)
            if array.size and (array.min() < 0 or array.max() >= self.num_nodes):
                raise NodeLookupError(f"node id outside 0..{self.num_nodes - 1}")

    def _as_batch(self, x) -> Tuple[np.ndarray, bool]:
        x = np.asarray(x, dtype=self.dtype)
        single = x.ndim == 1
        if single:
            x = x[None, :]
        if x.ndim != 2 or x.shape[1] != self.dim:
            raise DimensionMismatchError(f"expected vectors of width {self.dim}, got shape {x.shape}")
        return x, single

    def forward_chain(self, signature: Sequence[int], x) -> Tuple[np.ndarray, ForwardTape]:
        """
        Apply the composed chain to one vector (d,) or a batch (B, d).

        Returns:
            Output with the input's shape and the tape
        """
        batch, single = self._as_batch(x)
        y, tape = self.compose_lazy(signature).forward(batch, pass_id=self.version)
        return (y[0] if single else y), tape

    def forward_transform(self, edge_type: int, x) -> Tuple[np.ndarray, ForwardTape]:
        """Single transform; the length-1 chain code path."""
        return self.forward_chain((edge_type,), x)

    def score(self, signature: Sequence[int], v_i: int, v_j: int) -> float:
        """Proximity of v_i and v_j through a relation chain."""
        self._check_nodes(np.array([v_i, v_j]))
        y, _ = self.forward_chain(signature, self.phi[v_i])
        return float(y @ self.phi[v_j])

    def full_softmax_probs(self, signature: Sequence[int], v_i: int) -> np.ndarray:
        """Softmax over every node as context of v_i (oracle use only)."""
        self._check_nodes(np.array([v_i]))
        y, _ = self.forward_chain(signature, self.phi[v_i])
        scores = self.phi.astype(np.float64) @ y.astype(np.float64)
        scores -= scores.max()
        exp = np.exp(scores)
        return exp / exp.sum()

    def full_softmax_prob(self, signature: Sequence[int], v_i: int, v_j: int) -> float:
        self._check_nodes(np.array([v_j]))
        return float(self.full_softmax_probs(signature, v_i)[v_j])

    def batch_loss(
        self,
        signature: Sequence[int],
        sources: np.ndarray,
        targets: np.ndarray,
        negatives: np.ndarray
    ) -> Tuple[float, ForwardTape]:
        """
        Summed negative-sampling loss of a batch sharing one signature.

        The chain forward pass runs once; its output is dotted with the
        target and every negative. Scores are clamped to ±SCORE_CLAMP;
        the loss is flat past the clamp, so backward gives those scores
        zero gradient.

        Args:
            signature: Shared relation chain
            sources: (B,) first nodes
            targets: (B,) last nodes
            negatives: (B, neg) noise nodes

        Returns:
            Total loss and a tape ready for backward
        """
        sources = np.asarray(sources, dtype=np.int64)
        targets = np.asarray(targets, dtype=np.int64)
        negatives = np.asarray(negatives, dtype=np.int64)
        if negatives.ndim != 2 or negatives.shape[0] != sources.shape[0] or targets.shape != sources.shape:
            raise DimensionMismatchError(
                f"batch shapes disagree: sources {sources.shape}, targets {targets.shape}, negatives {negatives.shape}"
            )
        self._check_nodes(sources, targets, negatives)

        output, tape = self.compose_lazy(signature).forward(self.phi[sources], pass_id=self.version)
        target_vectors = self.phi[targets]
        negative_vectors = self.phi[negatives]
        pos = np.einsum('bd,bd->b', output, target_vectors)
        neg = np.einsum('bd,bkd->bk', output, negative_vectors)

        loss = softplus(-np.clip(pos, -SCORE_CLAMP, SCORE_CLAMP)).sum()
        loss += softplus(np.clip(neg, -SCORE_CLAMP, SCORE_CLAMP)).sum()

        tape.sources, tape.targets, tape.negatives = sources, targets, negatives
        tape.target_vectors, tape.negative_vectors = target_vectors, negative_vectors
        tape.pos_scores, tape.neg_scores = pos, neg
        return float(loss), tape

    def neg_sampling_loss(self, sample: ChainSample, negatives: Sequence[int]) -> Tuple[float, ForwardTape]:
        """Loss of a single chain sample."""
        return self.batch_loss(
            sample.relations,
            np.array([sample.first]),
            np.array([sample.last]),
            np.asarray(negatives, dtype=np.int64).reshape(1, -1),
        )

    def backward(self, tape: ForwardTape, check_stale: bool = True) -> Gradients:
        """
        Exact gradients of the loss recorded on `tape`.

        Args:
            tape: Tape returned by batch_loss / neg_sampling_loss
            check_stale: Reject tapes recorded before the last update (off in throughput mode)

        Raises:
            StaleTapeError: Parameters changed since the forward pass
        """
        if tape.pos_scores is None:
            raise StaleTapeError("tape has no loss recorded")
        if check_stale and tape.pass_id != self.version:
            raise StaleTapeError(f"tape recorded at version {tape.pass_id}, parameters are at {self.version}")

        output = tape.output
        pos, neg = tape.pos_scores, tape.neg_scores
        g_pos = np.where(np.abs(pos) <= SCORE_CLAMP, -sigmoid(-pos), 0.0)
        g_neg = np.where(np.abs(neg) <= SCORE_CLAMP, sigmoid(neg), 0.0)

        grad_output = g_pos[:, None] * tape.target_vectors + np.einsum('bk,bkd->bd', g_neg, tape.negative_vectors)
        grad_targets = g_pos[:, None] * output
        grad_negatives = g_neg[:, :, None] * output[:, None, :]

        grad_sources, transform_grads = self.compose_lazy(tape.signature).backward(tape, grad_output)

        rows = np.concatenate([tape.sources, tape.targets, tape.negatives.ravel()])
        values = np.concatenate([grad_sources, grad_targets, grad_negatives.reshape(-1, self.dim)])
        unique_rows, inverse = np.unique(rows, return_inverse=True)
        embedding = np.zeros((unique_rows.size, self.dim), dtype=values.dtype)
        np.add.at(embedding, inverse.ravel(), values)
        return Gradients(rows=unique_rows, embedding=embedding, transforms=transform_grads)

    def load_state(self, other: 'HineModel') -> None:
        """Copy parameters from another model in place (evaluators stay valid)."""
        if other.phi.shape != self.phi.shape or sorted(other.transforms) != sorted(self.transforms):
            raise DimensionMismatchError("checkpoint shape does not match the model")
        np.copyto(self.phi, other.phi.astype(self.dtype))
        for e, transform in self.transforms.items():
            source = other.transforms[e]
            if source.widths != transform.widths:
                raise DimensionMismatchError(f"transform {e}: widths {source.widths} != {transform.widths}")
            for mine, theirs in zip(transform.weights + transform.biases, source.weights + source.biases):
                np.copyto(mine, theirs.astype(mine.dtype))
        self.version += 1

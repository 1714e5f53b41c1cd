"""
Similarity ranking: MAP@K, nearest neighbors and link-prediction AUC.
"""
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from sklearn.metrics import roc_auc_score

from config.constants import NEIGHBOR_K, SCORE_TIE_DECIMALS
from graph.hin_graph import HinGraph
from model.embedding import EmbeddingTable
from utils.exceptions import UsageError

METRICS = ('cosine', 'dot')


def similarity_matrix(vectors: np.ndarray, metric: str = 'cosine') -> np.ndarray:
    """Pairwise similarity of rows; zero vectors have cosine 0 with everything."""
    vectors = np.asarray(vectors, dtype=np.float64)
    if metric == 'dot':
        return vectors @ vectors.T
    if metric == 'cosine':
        norms = np.linalg.norm(vectors, axis=1)
        unit = np.divide(vectors, norms[:, None], out=np.zeros_like(vectors), where=norms[:, None] > 0)
        return unit @ unit.T
    raise UsageError(f"unknown similarity metric '{metric}' (choose from {', '.join(METRICS)})")


def _ranked(scores: np.ndarray, candidates: np.ndarray, tie_keys: np.ndarray | None = None) -> np.ndarray:
    """
    Candidates by score descending, ties by `tie_keys` (default: the candidate ids) ascending.

    Scores are compared at SCORE_TIE_DECIMALS so summation-order noise does not split ties.
    """
    keys = candidates if tie_keys is None else tie_keys
    order = np.lexsort((keys, -np.round(scores, SCORE_TIE_DECIMALS)))
    return candidates[order]


@dataclass
class MapResult:
    value: float
    queries: int
    skipped: int


def average_precision_at_k(ranked_hits: Sequence[bool], positives: int, k: int) -> float:
    """AP@K = sum of P(i) at hit ranks i <= K, divided by min(R, K)."""
    hits = 0
    total = 0.0
    for rank, hit in enumerate(ranked_hits[:k], start=1):
        if hit:
            hits += 1
            total += hits / rank
    return total / min(positives, k) if positives else 0.0


def map_at_k(
    vectors: np.ndarray,
    classes: np.ndarray,
    k: int,
    metric: str = 'cosine',
    node_ids: np.ndarray | None = None
) -> MapResult:
    """
    Mean AP@K over labeled nodes; each query ranks every other labeled node.

    Args:
        vectors: (n, d) embeddings of the labeled nodes
        classes: (n,) class ids; same class = positive
        k: Cutoff K >= 1
        metric: 'cosine' or 'dot'
        node_ids: (n,) graph node ids breaking score ties; defaults to row order

    Returns:
        MAP and the number of queries used and skipped (no positives)
    """
    if k < 1:
        raise UsageError(f"K must be >= 1, got {k}")
    classes = np.asarray(classes)
    sims = similarity_matrix(vectors, metric)
    ids = np.arange(classes.size)
    node_ids = ids if node_ids is None else np.asarray(node_ids)
    if node_ids.shape != classes.shape:
        raise UsageError(f"node_ids has shape {node_ids.shape}, expected {classes.shape}")
    scores: List[float] = []
    skipped = 0
    for query in ids:
        others = ids[ids != query]
        positives = int(np.sum(classes[others] == classes[query]))
        if positives == 0:
            skipped += 1
            continue
        ranked = _ranked(sims[query, others], others, node_ids[others])
        scores.append(average_precision_at_k(classes[ranked] == classes[query], positives, k))
    value = float(np.mean(scores)) if scores else 0.0
    return MapResult(value, len(scores), skipped)


def top_k_neighbors(
    embeddings: EmbeddingTable,
    query: str,
    k: int = NEIGHBOR_K,
    metric: str = 'cosine'
) -> List[Tuple[str, float]]:
    """
    The k most similar nodes to `query`, excluding itself.

    Raises:
        NodeLookupError: Unknown query (message lists close matches)
    """
    row = embeddings.index_of(query)

    vectors = np.asarray(embeddings.vectors, dtype=np.float64)
    if metric == 'dot':
        scores = vectors @ vectors[row]
    elif metric == 'cosine':
        norms = np.linalg.norm(vectors, axis=1)
        denom = norms * norms[row]
        scores = np.divide(vectors @ vectors[row], denom, out=np.zeros(len(vectors)), where=denom > 0)
    else:
        raise UsageError(f"unknown similarity metric '{metric}' (choose from {', '.join(METRICS)})")

    candidates = np.delete(np.arange(len(vectors)), row)
    ranked = _ranked(scores[candidates], candidates)[:k]
    return [(embeddings.names[i], float(scores[i])) for i in ranked]


def link_auc(
    embeddings: EmbeddingTable,
    graph: HinGraph,
    sample_size: int = 1000,
    seed: int = 0,
    metric: str = 'cosine'
) -> float:
    """
    ROC AUC separating graph edges from corrupted pairs.

    Edges are drawn uniformly; each is paired with a corruption that keeps
    the source and replaces the target with a node drawn in proportion to
    in-degree (so degree alone does not separate the classes).
    """
    if graph.num_edges == 0:
        return 0.5
    rows = np.array([embeddings.index_of(name) for name in graph.nodes.names], dtype=np.int64)
    vectors = np.asarray(embeddings.vectors, dtype=np.float64)[rows]
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, graph.num_edges, size=min(sample_size, graph.num_edges))
    sources = graph.sources[picks]
    targets = graph.targets[picks]
    corrupted = graph.targets[rng.integers(0, graph.num_edges, size=picks.size)]

    def pair_scores(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        dots = np.einsum('nd,nd->n', vectors[a], vectors[b])
        if metric == 'dot':
            return dots
        denom = np.linalg.norm(vectors[a], axis=1) * np.linalg.norm(vectors[b], axis=1)
        return np.divide(dots, denom, out=np.zeros_like(dots), where=denom > 0)

    y_true = np.concatenate([np.ones(picks.size), np.zeros(picks.size)])
    y_score = np.concatenate([pair_scores(sources, targets), pair_scores(sources, corrupted)])
    return float(roc_auc_score(y_true, y_score))

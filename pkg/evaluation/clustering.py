"""
K-means clustering and normalized mutual information.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Sequence

import numpy as np
from sklearn.cluster import kmeans_plusplus
from sklearn.metrics import mutual_info_score

from config.constants import KMEANS_MAX_ITER, KMEANS_RESTARTS
from utils.exceptions import LabelError
from utils.logger import log


@dataclass
class KMeansResult:
    assignment: np.ndarray
    centers: np.ndarray
    wcss: float
    history: List[float] = field(default_factory=list)


def _assign(vectors: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, float]:
    distances = ((vectors[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    assignment = distances.argmin(axis=1)
    return assignment, float(distances[np.arange(vectors.shape[0]), assignment].sum())


def _lloyd(vectors: np.ndarray, centers: np.ndarray, max_iter: int) -> KMeansResult:
    history: List[float] = []
    assignment, wcss = _assign(vectors, centers)
    history.append(wcss)
    for _ in range(max_iter):
        for k in range(centers.shape[0]):
            members = vectors[assignment == k]
            # Empty cluster keeps its center
            if members.shape[0]:
                centers[k] = members.mean(axis=0)
        new_assignment, wcss = _assign(vectors, centers)
        history.append(wcss)
        if np.array_equal(new_assignment, assignment):
            break
        assignment = new_assignment
    return KMeansResult(assignment, centers, wcss, history)


def kmeans(
    vectors: np.ndarray,
    n_clusters: int,
    seed: int = 0,
    restarts: int = KMEANS_RESTARTS,
    max_iter: int = KMEANS_MAX_ITER
) -> KMeansResult:
    """
    Lloyd's algorithm with k-means++ seeding, best of `restarts` by WCSS.

    Args:
        vectors: (n, d) points
        n_clusters: K
        seed: Random seed
        restarts: Independent seedings
        max_iter: Lloyd iterations per restart

    Returns:
        Best result; `history` holds the WCSS after each iteration of that run

    Raises:
        LabelError: K < 1 or K > n
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    n = vectors.shape[0]
    if not 1 <= n_clusters <= n:
        raise LabelError(f"cannot form {n_clusters} clusters from {n} vectors")

    rng = np.random.default_rng(seed)
    best = None
    for restart in range(max(restarts, 1)):
        restart_seed = int(rng.integers(2 ** 31 - 1))
        if np.allclose(vectors, vectors[0]):
            # k-means++ needs positive distances; any distinct rows do
            index = np.random.default_rng(restart_seed).choice(n, n_clusters, replace=False)
            centers = vectors[index].copy()
        else:
            centers, _ = kmeans_plusplus(vectors, n_clusters, random_state=restart_seed)
        result = _lloyd(vectors, centers.copy(), max_iter)
        if best is None or result.wcss < best.wcss:
            best = result
    log.debug(f"[EVAL] KMEANS | k={n_clusters} | wcss={best.wcss:.6g} | iterations={len(best.history) - 1}")
    return best


def nmi(assignment: Sequence[int], labels: Sequence[int]) -> float:
    """
    I(A;B) / sqrt(H(A) H(B)); 0 when either partition has zero entropy.
    """
    a = np.asarray(assignment)
    b = np.asarray(labels)
    if a.shape != b.shape:
        raise LabelError(f"partitions cover different items: {a.shape} vs {b.shape}")
    h_a = mutual_info_score(a, a)
    h_b = mutual_info_score(b, b)
    if h_a <= 0 or h_b <= 0:
        return 0.0
    value = mutual_info_score(a, b) / np.sqrt(h_a * h_b)
    return float(min(max(value, 0.0), 1.0))


def export_clusters(path: Path | str, names: Sequence[str], assignment: Sequence[int]) -> Path:
    """Write `node<TAB>cluster_id` rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8') as handle:
        for name, cluster in zip(names, assignment):
            handle.write(f"{name}\t{int(cluster)}\n")
    return path

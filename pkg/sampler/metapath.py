"""
Meta-path guided chain sampling.
"""
from typing import Iterator, List, Optional

import numpy as np

from config.constants import METAPATH_ATTEMPTS_PER_SAMPLE
from graph.hin_graph import HinGraph, MetaPathPattern
from sampler.records import ChainSample
from utils.exceptions import ChainLengthError
from utils.logger import log


def metapath_instances(
    graph: HinGraph,
    pattern: MetaPathPattern,
    count: int,
    seed: int,
    max_chain_length: Optional[int] = None
) -> Iterator[ChainSample]:
    """
    Draw random path instances of a meta path, keeping only the endpoints.

    A walk starts at a uniformly chosen node that has an out-edge of the first
    relation (and the first node type, when constrained) and follows the
    pattern, picking uniformly among matching out-edges. Walks that hit a dead
    end are retried; after `count * 10` attempts the stream ends early.

    Args:
        graph: Source graph
        pattern: Relation sequence with optional node-type constraints
        count: Number of samples wanted
        seed: Random seed
        max_chain_length: Optional c the pattern must not exceed

    Returns:
        Iterator of ChainSamples with the pattern's relations (empty if no instance exists)
    """
    if max_chain_length is not None and len(pattern) > max_chain_length:
        raise ChainLengthError(f"pattern of length {len(pattern)} exceeds max chain length {max_chain_length}")
    for relation in pattern.relations:
        if not 0 <= relation < len(graph.edge_types):
            return iter(())
    return _walk_pattern(graph, pattern, count, np.random.default_rng(seed))


def _matching_positions(graph: HinGraph, node: int, relation: int, node_type: Optional[int]) -> np.ndarray:
    lo, hi = graph.indptr[node], graph.indptr[node + 1]
    mask = graph.out_relations[lo:hi] == relation
    if node_type is not None:
        mask &= graph.node_type_ids[graph.out_targets[lo:hi]] == node_type
    return lo + np.flatnonzero(mask)


def _walk_pattern(graph: HinGraph, pattern: MetaPathPattern, count: int, rng: np.random.Generator) -> Iterator[ChainSample]:
    types: List[Optional[int]] = list(pattern.node_types) if pattern.node_types else [None] * (len(pattern) + 1)

    first_relation = pattern.relations[0]
    candidates = np.unique(graph.sources[graph.relations == first_relation])
    if types[0] is not None and candidates.size:
        candidates = candidates[graph.node_type_ids[candidates] == types[0]]
    if candidates.size == 0:
        return

    produced = 0
    attempts = 0
    max_attempts = count * METAPATH_ATTEMPTS_PER_SAMPLE
    while produced < count and attempts < max_attempts:
        attempts += 1
        current = int(candidates[rng.integers(candidates.size)])
        start = current
        for step, relation in enumerate(pattern.relations):
            positions = _matching_positions(graph, current, relation, types[step + 1])
            if positions.size == 0:
                break
            current = int(graph.out_targets[positions[rng.integers(positions.size)]])
        else:
            produced += 1
            yield ChainSample(start, tuple(pattern.relations), current)

    if produced < count:
        log.warning(f"[SAMPLE] METAPATH | produced {produced}/{count} instances after {attempts} attempts")

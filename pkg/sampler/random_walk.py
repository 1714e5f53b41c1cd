"""
Typed random walks and chain-sample extraction.
"""
from typing import Iterator, List

import numpy as np

from config.train_config import SamplerConfig
from graph.hin_graph import HinGraph
from sampler.records import ChainSample, TypedWalk


def random_walks(graph: HinGraph, config: SamplerConfig) -> Iterator[TypedWalk]:
    """
    Generate w walks per node following out-edges.

    Each round visits every node once in a seeded random order. A step picks
    uniformly among the current node's out-edges (parallel edges weigh by
    multiplicity); a walk stops after l nodes or at a node without out-edges.

    Args:
        graph: Source graph
        config: walks_per_node, max_walk_length and seed are used

    Yields:
        TypedWalk per start
    """
    rng = np.random.default_rng(config.seed)
    indptr = graph.indptr
    out_relations = graph.out_relations
    out_targets = graph.out_targets

    for _ in range(config.walks_per_node):
        for start in rng.permutation(graph.num_nodes):
            current = int(start)
            nodes: List[int] = [current]
            relations: List[int] = []
            while len(nodes) < config.max_walk_length:
                lo, hi = indptr[current], indptr[current + 1]
                if hi == lo:
                    break
                position = lo + int(rng.random() * (hi - lo))
                relations.append(int(out_relations[position]))
                current = int(out_targets[position])
                nodes.append(current)
            yield TypedWalk(tuple(nodes), tuple(relations))


def walk_to_chain_samples(walk: TypedWalk, max_chain_length: int) -> List[ChainSample]:
    """
    Cut a walk into chain samples, dropping intermediate nodes.

    Every contiguous stretch of m+1 nodes (1 <= m <= c) yields
    (first node, the m relations, last node); a walk of n nodes gives
    max(0, n - m) samples of length m.

    Args:
        walk: Typed walk
        max_chain_length: c

    Returns:
        Samples ordered by chain length, then by position
    """
    if max_chain_length < 1:
        raise ValueError(f"max_chain_length must be >= 1, got {max_chain_length}")

    nodes, relations = walk.nodes, walk.relations
    samples = []
    for m in range(1, max_chain_length + 1):
        for i in range(len(nodes) - m):
            samples.append(ChainSample(nodes[i], relations[i:i + m], nodes[i + m]))
    return samples


def walks_to_chain_samples(walks: Iterator[TypedWalk], max_chain_length: int) -> Iterator[ChainSample]:
    """Stream chain samples from a stream of walks."""
    for walk in walks:
        yield from walk_to_chain_samples(walk, max_chain_length)

"""
Uniform edge-triple sampling for single-edge training.
"""
from typing import Iterator

import numpy as np

from graph.hin_graph import HinGraph
from sampler.records import ChainSample
from utils.exceptions import EmptyGraphError

_DRAW_BLOCK = 4096


def sample_edge_triples(graph: HinGraph, count: int, seed: int) -> Iterator[ChainSample]:
    """
    Draw edge triples (v_i, [e], v_j) uniformly over the edge multiset.

    Args:
        graph: Source graph
        count: Number of triples to draw
        seed: Random seed; equal seeds give equal streams

    Returns:
        Iterator of length-1 ChainSamples

    Raises:
        EmptyGraphError: If the graph has no edges
    """
    if graph.num_edges == 0:
        raise EmptyGraphError("cannot sample edge triples from a graph without edges")
    return _draw_triples(graph, count, np.random.default_rng(seed))


def _draw_triples(graph: HinGraph, count: int, rng: np.random.Generator) -> Iterator[ChainSample]:
    sources, relations, targets = graph.sources, graph.relations, graph.targets
    remaining = count
    while remaining > 0:
        block = min(remaining, _DRAW_BLOCK)
        for index in rng.integers(0, graph.num_edges, size=block):
            yield ChainSample(int(sources[index]), (int(relations[index]),), int(targets[index]))
        remaining -= block

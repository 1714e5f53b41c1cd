"""
Shared fixtures for the test scripts.
"""
import sys
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple

sys.path.insert(0, str(Path(__file__).parent.parent))

import numpy as np

from graph.hin_graph import HinGraph, Vocabulary
from sampler import ChainSample


def write_lines(path: Path, lines: Iterable[str]) -> Path:
    """Write newline-terminated lines."""
    path.write_text(''.join(f"{line}\n" for line in lines), encoding='utf-8')
    return path


def graph_from_triples(triples: Sequence[Tuple[str, str, str]], node_types: dict | None = None) -> HinGraph:
    """Build a graph in memory with the same id rules as the loader."""
    nodes = Vocabulary()
    edge_types = Vocabulary()
    sources, relations, targets = [], [], []
    for src, rel, dst in triples:
        sources.append(nodes.add(src))
        relations.append(edge_types.add(rel))
        targets.append(nodes.add(dst))
    node_types = node_types or {}
    type_vocab = Vocabulary()
    type_ids = [type_vocab.add(node_types.get(name, 'untyped')) for name in nodes.names]
    return HinGraph(nodes, type_vocab, edge_types, type_ids, sources, relations, targets)


def planted_blocks(
    block_size: int = 50,
    p_intra: float = 0.3,
    p_inter: float = 0.02,
    seed: int = 0
) -> Tuple[HinGraph, np.ndarray]:
    """
    Two planted blocks: e_intra edges inside a block, e_inter edges across.

    Returns:
        Graph and the block id of every node
    """
    rng = np.random.default_rng(seed)
    n = 2 * block_size
    blocks = np.repeat([0, 1], block_size)
    nodes = Vocabulary(f"n{i}" for i in range(n))
    edge_types = Vocabulary(['e_intra', 'e_inter'])
    sources: List[int] = []
    relations: List[int] = []
    targets: List[int] = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            same = blocks[i] == blocks[j]
            if rng.random() < (p_intra if same else p_inter):
                sources.append(i)
                relations.append(0 if same else 1)
                targets.append(j)
    graph = HinGraph(nodes, Vocabulary(['untyped']), edge_types, [0] * n, sources, relations, targets)
    return graph, blocks


def planted_trips(
    per_class: int = 10,
    hubs: int = 4,
    trips: int = 20,
    seed: int = 0
) -> Tuple[HinGraph, List[ChainSample], np.ndarray]:
    """
    Trips home -go-> hub -arrive-> dest where the dest class follows the home class.

    The graph links every home to every hub and every hub to every dest, so
    single edges say nothing about classes; only the go,arrive chains do.

    Returns:
        Graph, chain samples (both single hops and the two-hop chain of every
        trip), and the class of every node (-1 for hubs)
    """
    rng = np.random.default_rng(seed)
    homes = [f"home{c}_{i}" for c in range(2) for i in range(per_class)]
    dests = [f"dest{c}_{i}" for c in range(2) for i in range(per_class)]
    hub_names = [f"hub{j}" for j in range(hubs)]
    triples = [(h, 'go', hub) for h in homes for hub in hub_names]
    triples += [(hub, 'arrive', d) for hub in hub_names for d in dests]
    types = {**dict.fromkeys(homes, 'home'), **dict.fromkeys(hub_names, 'hub'), **dict.fromkeys(dests, 'dest')}
    graph = graph_from_triples(triples, types)

    go, arrive = graph.edge_types.id_of('go'), graph.edge_types.id_of('arrive')
    samples: List[ChainSample] = []
    for index, home in enumerate(homes):
        cls = index // per_class
        for _ in range(trips):
            hub = graph.node_id(hub_names[int(rng.integers(0, hubs))])
            dest = graph.node_id(dests[cls * per_class + int(rng.integers(0, per_class))])
            first = graph.node_id(home)
            samples += [
                ChainSample(first, (go,), hub),
                ChainSample(hub, (arrive,), dest),
                ChainSample(first, (go, arrive), dest),
            ]

    classes = np.full(graph.num_nodes, -1)
    for names in (homes, dests):
        for index, name in enumerate(names):
            classes[graph.node_id(name)] = index // per_class
    return graph, samples, classes

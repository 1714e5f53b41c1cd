"""
Sample corpus helpers: min-count filtering and the sample file codec.
"""
from collections import Counter
from pathlib import Path
from typing import Iterable, List

from config.constants import FIELD_SEPARATOR, RELATION_SEPARATOR
from graph.hin_graph import HinGraph
from sampler.records import ChainSample
from utils.exceptions import ParseError
from validators.record_validator import iter_records, split_relations


def endpoint_counts(samples: Iterable[ChainSample]) -> Counter:
    """Occurrences of each node as a sample endpoint (first and last both count)."""
    counts: Counter = Counter()
    for sample in samples:
        counts[sample.first] += 1
        counts[sample.last] += 1
    return counts


def apply_min_count(samples: Iterable[ChainSample], min_count: int) -> List[ChainSample]:
    """
    Drop samples whose first or last node occurs fewer than `min_count` times as an endpoint.

    Args:
        samples: Sample corpus
        min_count: Frequency lower bound (0 keeps everything)

    Returns:
        Filtered samples in original order
    """
    samples = list(samples)
    if min_count <= 0:
        return samples
    counts = endpoint_counts(samples)
    return [s for s in samples if counts[s.first] >= min_count and counts[s.last] >= min_count]


def write_samples(samples: Iterable[ChainSample], path: Path | str, graph: HinGraph) -> int:
    """
    Write samples as `first<TAB>e_1,...,e_m<TAB>last` using node and edge type names.

    Returns:
        Number of samples written
    """
    node_names = graph.nodes.names
    edge_names = graph.edge_types.names
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    written = 0
    with path.open('w', encoding='utf-8') as handle:
        for sample in samples:
            chain = RELATION_SEPARATOR.join(edge_names[r] for r in sample.relations)
            handle.write(f"{node_names[sample.first]}{FIELD_SEPARATOR}{chain}{FIELD_SEPARATOR}{node_names[sample.last]}\n")
            written += 1
    return written


def read_samples(path: Path | str, graph: HinGraph) -> List[ChainSample]:
    """
    Read a sample file, resolving names against the graph.

    Raises:
        ParseError: Malformed row or a name unknown to the graph (names file and line)
    """
    samples = []
    nodes = graph.nodes
    edge_types = graph.edge_types
    for line_no, (first, chain, last) in iter_records(path, 3):
        first_id, last_id = nodes.get(first), nodes.get(last)
        if first_id is None or last_id is None:
            missing = first if first_id is None else last
            raise ParseError(f"unknown node '{missing}'", path, line_no)
        relation_ids = []
        for name in split_relations(chain, path, line_no):
            relation = edge_types.get(name)
            if relation is None:
                raise ParseError(f"unknown edge type '{name}'", path, line_no)
            relation_ids.append(relation)
        samples.append(ChainSample(first_id, tuple(relation_ids), last_id))
    return samples

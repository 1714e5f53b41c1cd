"""
Graph ingestion and export.
Reads `src<TAB>edge_type<TAB>dst` edge files and optional `node<TAB>node_type` files.
"""
from pathlib import Path
from typing import Dict, Optional

import numpy as np

from config.constants import DEFAULT_NODE_TYPE, FIELD_SEPARATOR
from graph.hin_graph import HinGraph, Vocabulary, validate_heterogeneous
from utils.exceptions import EmptyGraphError, ParseError
from utils.logger import log
from validators.record_validator import iter_records


def load_node_types(path: Path | str) -> Dict[str, str]:
    """
    Read a node-type file.

    Args:
        path: File with `node<TAB>node_type` rows

    Returns:
        Mapping node name -> node type name, in file order

    Raises:
        ParseError: Malformed row or a node listed with two different types
    """
    types: Dict[str, str] = {}
    for line_no, (node, node_type) in iter_records(path, 2):
        previous = types.get(node)
        if previous is not None and previous != node_type:
            raise ParseError(f"node '{node}' already has type '{previous}', got '{node_type}'", path, line_no)
        types[node] = node_type
    return types


def load_graph(edge_file: Path | str, node_type_file: Optional[Path | str] = None) -> HinGraph:
    """
    Load and validate a heterogeneous graph.

    Node ids are assigned by first appearance in the edge file. Nodes missing from
    the node-type file get the type "untyped"; type-file entries for nodes that
    never appear in an edge are ignored.

    Args:
        edge_file: Edge list path
        node_type_file: Optional node-type path

    Returns:
        Immutable HinGraph

    Raises:
        ParseError: Malformed row (message names file and line)
        EmptyGraphError: No edges in the file
    """
    nodes = Vocabulary()
    edge_types = Vocabulary()
    sources, relations, targets = [], [], []

    for _, (src, edge_type, dst) in iter_records(edge_file, 3):
        sources.append(nodes.add(src))
        relations.append(edge_types.add(edge_type))
        targets.append(nodes.add(dst))

    if not sources:
        raise EmptyGraphError(f"{edge_file}: no edges found")

    type_names = load_node_types(node_type_file) if node_type_file is not None else {}
    node_types = Vocabulary(dict.fromkeys(type_names[name] for name in nodes.names if name in type_names))
    node_type_ids = np.empty(len(nodes), dtype=np.int64)
    untyped = 0
    for index, name in enumerate(nodes.names):
        type_name = type_names.get(name)
        if type_name is None:
            type_name = DEFAULT_NODE_TYPE
            untyped += 1
        node_type_ids[index] = node_types.add(type_name)

    ignored = sum(1 for name in type_names if name not in nodes)
    if node_type_file is not None:
        if untyped:
            log.warning(f"{untyped} node(s) missing from {node_type_file}; typed as '{DEFAULT_NODE_TYPE}'")
        if ignored:
            log.warning(f"{ignored} node(s) in {node_type_file} have no edges and were ignored")

    graph = HinGraph(nodes, node_types, edge_types, node_type_ids, sources, relations, targets)
    log.info(f"Loaded graph from {edge_file}: |V|={graph.num_nodes} | |E|={graph.num_edges} | "
             f"node_types={len(node_types)} | edge_types={len(edge_types)}")
    return graph


def export_graph(graph: HinGraph, edge_file: Path | str, node_type_file: Optional[Path | str] = None) -> None:
    """
    Write a graph back to the ingestion formats, edges in insertion order.

    Args:
        graph: Graph to export
        edge_file: Output edge list path
        node_type_file: Optional output node-type path
    """
    names = graph.nodes.names
    edge_names = graph.edge_types.names
    edge_file = Path(edge_file)
    edge_file.parent.mkdir(parents=True, exist_ok=True)
    with edge_file.open('w', encoding='utf-8') as handle:
        for src, rel, dst in graph.edges():
            handle.write(FIELD_SEPARATOR.join((names[src], edge_names[rel], names[dst])) + '\n')

    if node_type_file is not None:
        type_names = graph.node_types.names
        with Path(node_type_file).open('w', encoding='utf-8') as handle:
            for index, name in enumerate(names):
                handle.write(f"{name}{FIELD_SEPARATOR}{type_names[graph.node_type_ids[index]]}\n")


def graph_statistics(graph: HinGraph) -> Dict[str, object]:
    """
    Summary statistics for the `info` command.

    Returns:
        Dict with sizes, per-type counts, out-degree summary and heterogeneity flag
    """
    degrees = np.diff(graph.indptr)
    node_type_counts = np.bincount(graph.node_type_ids, minlength=len(graph.node_types))
    edge_type_counts = np.bincount(graph.relations, minlength=len(graph.edge_types))
    return {
        'num_nodes': graph.num_nodes,
        'num_edges': graph.num_edges,
        'node_types': {name: int(node_type_counts[i]) for i, name in enumerate(graph.node_types.names)},
        'edge_types': {name: int(edge_type_counts[i]) for i, name in enumerate(graph.edge_types.names)},
        'out_degree_min': int(degrees.min()) if degrees.size else 0,
        'out_degree_mean': float(degrees.mean()) if degrees.size else 0.0,
        'out_degree_median': float(np.median(degrees)) if degrees.size else 0.0,
        'out_degree_max': int(degrees.max()) if degrees.size else 0,
        'sink_nodes': int(np.count_nonzero(degrees == 0)),
        'self_loops': int(np.count_nonzero(graph.sources == graph.targets)),
        'heterogeneous': validate_heterogeneous(graph),
    }

"""Graph package initialization."""
from .hin_graph import (
    HinGraph, Vocabulary, NodeType, EdgeType, MetaPathPattern,
    validate_heterogeneous, build_pattern
)
from .loader import load_graph, load_node_types, export_graph, graph_statistics

__all__ = [
    'HinGraph', 'Vocabulary', 'NodeType', 'EdgeType', 'MetaPathPattern',
    'validate_heterogeneous', 'build_pattern',
    'load_graph', 'load_node_types', 'export_graph', 'graph_statistics',
]

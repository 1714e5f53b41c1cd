"""
Heterogeneous information network data model.
Immutable typed directed multigraph with CSR out-adjacency for samplers.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from utils.exceptions import EdgeTypeLookupError, NodeLookupError


@dataclass(frozen=True)
class NodeType:
    """Node type γ with a dense id."""
    id: int
    name: str


@dataclass(frozen=True)
class EdgeType:
    """Edge type (relation) with a dense id."""
    id: int
    name: str


class Vocabulary:
    """Bijective mapping between names and dense ids 0..n-1, in insertion order."""

    def __init__(self, names: Iterable[str] = ()):
        self._names: List[str] = []
        self._ids: Dict[str, int] = {}
        self._read_only = False
        for name in names:
            self.add(name)

    def frozen(self) -> 'Vocabulary':
        """A read-only copy; `add` on it raises for unseen names."""
        copy = Vocabulary(self._names)
        copy._read_only = True
        return copy

    @property
    def read_only(self) -> bool:
        return self._read_only

    def add(self, name: str) -> int:
        """Return the id of `name`, assigning the next id on first sight."""
        index = self._ids.get(name)
        if index is None:
            if self._read_only:
                raise TypeError(f"cannot add '{name}': vocabulary is read-only")
            index = len(self._names)
            self._ids[name] = index
            self._names.append(name)
        return index

    def id_of(self, name: str) -> int:
        """Id of a known name; raises KeyError otherwise."""
        return self._ids[name]

    def get(self, name: str) -> Optional[int]:
        """Id of `name` or None."""
        return self._ids.get(name)

    def name_of(self, index: int) -> str:
        """Name for an id."""
        return self._names[index]

    @property
    def names(self) -> List[str]:
        """Names in id order (a copy)."""
        return list(self._names)

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: object) -> bool:
        return name in self._ids


@dataclass(frozen=True)
class MetaPathPattern:
    """
    Ordered relation sequence e_1..e_{n-1}, optionally with node-type constraints γ_1..γ_n.

    A node-type entry of None leaves that position unconstrained.
    """
    relations: Tuple[int, ...]
    node_types: Optional[Tuple[Optional[int], ...]] = None

    def __post_init__(self):
        if len(self.relations) < 1:
            raise ValueError("meta path pattern needs at least one relation")
        if self.node_types is not None and len(self.node_types) != len(self.relations) + 1:
            raise ValueError(
                f"meta path with {len(self.relations)} relations needs "
                f"{len(self.relations) + 1} node-type entries, got {len(self.node_types)}"
            )

    def __len__(self) -> int:
        return len(self.relations)


class HinGraph:
    """
    Typed directed multigraph G = (V, E) with node-type map φ and edge-type map ψ.

    Edges are stored in insertion order and indexed in CSR form by source node;
    within a node, out-edges keep insertion order. Parallel edges and self-loops
    are kept. All arrays are read-only.
    """

    def __init__(
        self,
        nodes: Vocabulary,
        node_types: Vocabulary,
        edge_types: Vocabulary,
        node_type_ids: Sequence[int],
        sources: Sequence[int],
        relations: Sequence[int],
        targets: Sequence[int]
    ):
        """
        Build the graph from parallel edge arrays.

        Args:
            nodes: Node name vocabulary (ids 0..|V|-1)
            node_types: Node type vocabulary
            edge_types: Edge type vocabulary
            node_type_ids: Node type id per node
            sources, relations, targets: One entry per edge, in insertion order
        """
        # read-only copies; the caller may keep extending its own vocabularies
        self._nodes = nodes.frozen()
        self._node_types = node_types.frozen()
        self._edge_types = edge_types.frozen()

        num_nodes = len(nodes)
        self._node_type_ids = _frozen(np.asarray(node_type_ids, dtype=np.int64))
        if self._node_type_ids.shape != (num_nodes,):
            raise ValueError(f"expected {num_nodes} node type ids, got {self._node_type_ids.shape[0]}")

        src = np.asarray(sources, dtype=np.int64)
        rel = np.asarray(relations, dtype=np.int64)
        dst = np.asarray(targets, dtype=np.int64)
        if not (src.shape == rel.shape == dst.shape):
            raise ValueError("edge arrays must have equal length")
        if src.size and (src.min() < 0 or src.max() >= num_nodes or dst.min() < 0 or dst.max() >= num_nodes):
            raise NodeLookupError("edge endpoint outside the node table")
        if rel.size and (rel.min() < 0 or rel.max() >= len(edge_types)):
            raise EdgeTypeLookupError("edge type outside the edge type inventory")

        self._sources = _frozen(src)
        self._relations = _frozen(rel)
        self._targets = _frozen(dst)

        # CSR by source; a stable sort keeps insertion order within each node
        order = np.argsort(src, kind='stable')
        counts = np.bincount(src, minlength=num_nodes) if num_nodes else np.zeros(0, dtype=np.int64)
        indptr = np.zeros(num_nodes + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        self._indptr = _frozen(indptr)
        self._out_relations = _frozen(rel[order])
        self._out_targets = _frozen(dst[order])

    # ------------------------------------------------------------------ sizes

    @property
    def num_nodes(self) -> int:
        """|V|"""
        return len(self._nodes)

    @property
    def num_edges(self) -> int:
        """|E| (parallel edges counted separately)"""
        return int(self._sources.shape[0])

    @property
    def nodes(self) -> Vocabulary:
        """Node names (read-only)."""
        return self._nodes

    @property
    def node_types(self) -> Vocabulary:
        return self._node_types

    @property
    def edge_types(self) -> Vocabulary:
        return self._edge_types

    @property
    def edge_type_list(self) -> List[EdgeType]:
        """L: every edge type present in the graph."""
        return [EdgeType(i, name) for i, name in enumerate(self._edge_types.names)]

    @property
    def node_type_ids(self) -> np.ndarray:
        """φ as an array of node type ids indexed by node id."""
        return self._node_type_ids

    # ------------------------------------------------------------------ arrays

    @property
    def sources(self) -> np.ndarray:
        return self._sources

    @property
    def relations(self) -> np.ndarray:
        return self._relations

    @property
    def targets(self) -> np.ndarray:
        return self._targets

    @property
    def indptr(self) -> np.ndarray:
        """CSR row pointer: out-edges of v are positions indptr[v]:indptr[v+1]."""
        return self._indptr

    @property
    def out_relations(self) -> np.ndarray:
        return self._out_relations

    @property
    def out_targets(self) -> np.ndarray:
        return self._out_targets

    # ------------------------------------------------------------------ lookups

    def check_node(self, v: int) -> int:
        """Validate a node id."""
        if not isinstance(v, (int, np.integer)) or not 0 <= v < self.num_nodes:
            raise NodeLookupError(f"invalid node id {v!r} (graph has {self.num_nodes} nodes)")
        return int(v)

    def check_edge_type(self, e: int) -> int:
        """Validate an edge type id."""
        if not isinstance(e, (int, np.integer)) or not 0 <= e < len(self._edge_types):
            raise EdgeTypeLookupError(f"unknown edge type {e!r} (graph has {len(self._edge_types)} edge types)")
        return int(e)

    def node_id(self, name: str) -> int:
        """Node id for a name."""
        index = self._nodes.get(name)
        if index is None:
            raise NodeLookupError(f"unknown node '{name}'")
        return index

    def edge_type_id(self, name: str) -> int:
        """Edge type id for a name."""
        index = self._edge_types.get(name)
        if index is None:
            raise EdgeTypeLookupError(f"unknown edge type '{name}'")
        return index

    def node_type_of(self, v: int) -> NodeType:
        """φ(v)"""
        type_id = int(self._node_type_ids[self.check_node(v)])
        return NodeType(type_id, self._node_types.name_of(type_id))

    def out_degree(self, v: int) -> int:
        """Number of out-edges of v (with multiplicity)."""
        v = self.check_node(v)
        return int(self._indptr[v + 1] - self._indptr[v])

    def out_neighbors(self, v: int, e: Optional[int] = None) -> List[Tuple[int, int]]:
        """
        Typed out-edges of a node in insertion order.

        Args:
            v: Source node id
            e: Optional edge type filter

        Returns:
            (edge type id, target node id) pairs
        """
        v = self.check_node(v)
        if e is not None:
            e = self.check_edge_type(e)
        start, end = self._indptr[v], self._indptr[v + 1]
        rels = self._out_relations[start:end]
        dsts = self._out_targets[start:end]
        if e is not None:
            mask = rels == e
            rels, dsts = rels[mask], dsts[mask]
        return [(int(r), int(t)) for r, t in zip(rels, dsts)]

    def edges(self) -> Iterator[Tuple[int, int, int]]:
        """All edges (source, edge type, target) in insertion order."""
        for s, r, t in zip(self._sources, self._relations, self._targets):
            yield int(s), int(r), int(t)

    def __repr__(self) -> str:
        return (
            f"HinGraph(|V|={self.num_nodes}, |E|={self.num_edges}, "
            f"node_types={len(self._node_types)}, edge_types={len(self._edge_types)})"
        )


def validate_heterogeneous(graph: HinGraph) -> bool:
    """
    Heterogeneity test: at least two node types among used nodes or two edge types among used edges.

    Args:
        graph: Graph to test

    Returns:
        True if the graph is a HIN
    """
    used_nodes = np.union1d(graph.sources, graph.targets)
    node_types_used = np.unique(graph.node_type_ids[used_nodes]).size if used_nodes.size else 0
    edge_types_used = np.unique(graph.relations).size
    return node_types_used >= 2 or edge_types_used >= 2


def build_pattern(
    graph: HinGraph,
    relation_names: Sequence[str],
    node_type_names: Optional[Sequence[Optional[str]]] = None
) -> MetaPathPattern:
    """
    Build a meta path pattern from names, validating them against the graph inventories.

    Args:
        graph: Graph providing the inventories
        relation_names: Edge type names e_1..e_{n-1}
        node_type_names: Optional node type names γ_1..γ_n ("*" or None = any)

    Returns:
        MetaPathPattern with ids
    """
    relations = tuple(graph.edge_type_id(name) for name in relation_names)
    node_types = None
    if node_type_names is not None:
        resolved = []
        for name in node_type_names:
            if name is None or name == '*':
                resolved.append(None)
                continue
            type_id = graph.node_types.get(name)
            if type_id is None:
                raise NodeLookupError(f"unknown node type '{name}'")
            resolved.append(type_id)
        node_types = tuple(resolved)
    return MetaPathPattern(relations, node_types)


def _frozen(array: np.ndarray) -> np.ndarray:
    """Mark an array read-only."""
    array.flags.writeable = False
    return array

"""
Training record types.
"""
from dataclasses import dataclass
from typing import Tuple


@dataclass(frozen=True, slots=True)
class ChainSample:
    """
    Training record (first, e_1..e_m, last).

    m = 1 records are the edge triples of single-edge training.
    """
    first: int
    relations: Tuple[int, ...]
    last: int

    def __post_init__(self):
        if not self.relations:
            raise ValueError("chain sample needs at least one relation")

    @property
    def length(self) -> int:
        """Chain length m."""
        return len(self.relations)


@dataclass(frozen=True, slots=True)
class TypedWalk:
    """Walk of n nodes with the n-1 relations traversed between them."""
    nodes: Tuple[int, ...]
    relations: Tuple[int, ...]

    def __post_init__(self):
        if not self.nodes:
            raise ValueError("walk needs at least one node")
        if len(self.relations) != len(self.nodes) - 1:
            raise ValueError(
                f"walk of {len(self.nodes)} nodes needs {len(self.nodes) - 1} relations, got {len(self.relations)}"
            )

    def __len__(self) -> int:
        return len(self.nodes)

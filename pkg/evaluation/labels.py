"""
Node label files: `node<TAB>class_name`.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import List

import numpy as np

from model.embedding import EmbeddingTable
from utils.exceptions import LabelError, NodeLookupError
from validators.record_validator import iter_records


@dataclass
class LabelSet:
    """Labeled embedding rows with class ids into sorted class names."""
    rows: np.ndarray
    classes: np.ndarray
    class_names: List[str]

    def __len__(self) -> int:
        return int(self.rows.size)

    @property
    def num_classes(self) -> int:
        return len(self.class_names)

    def require_classes(self, minimum: int = 2) -> None:
        """Raise LabelError if fewer than `minimum` classes are present."""
        present = np.unique(self.classes).size
        if present < minimum:
            raise LabelError(f"need at least {minimum} classes, labels contain {present}")


def load_labels(path: Path | str, embeddings: EmbeddingTable) -> LabelSet:
    """
    Read labels and resolve nodes against an embedding table.

    A node labeled twice keeps its first label only if both agree.

    Raises:
        LabelError: Unknown node or conflicting labels (names file and line)
    """
    seen = {}
    names: List[str] = []
    rows: List[int] = []
    for line_no, (node, class_name) in iter_records(path, 2):
        try:
            row = embeddings.index_of(node)
        except NodeLookupError as e:
            raise LabelError(f"{path}:{line_no}: {e}") from e
        if row in seen:
            if seen[row] != class_name:
                raise LabelError(f"{path}:{line_no}: node '{node}' labeled both '{seen[row]}' and '{class_name}'")
            continue
        seen[row] = class_name
        rows.append(row)
        names.append(class_name)

    class_names = sorted(set(names))
    class_ids = {name: index for index, name in enumerate(class_names)}
    return LabelSet(
        rows=np.array(rows, dtype=np.int64),
        classes=np.array([class_ids[n] for n in names], dtype=np.int64),
        class_names=class_names,
    )

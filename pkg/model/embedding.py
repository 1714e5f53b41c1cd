"""
Node embedding table and its file formats.

Text: header `|V| d`, then `name v_1 ... v_d` per row (6 significant digits).
Binary: two little-endian uint64 counts then |V| rows of little-endian float32,
with node names in a `.vocab` sidecar (one per line).
"""
import difflib
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from config.constants import (
    BINARY_HEADER_DTYPE, BINARY_ROW_DTYPE, MSG_UNKNOWN_NODE, TEXT_FLOAT_FORMAT, VOCAB_SIDECAR_SUFFIX
)
from utils.exceptions import DimensionMismatchError, NodeLookupError, ParseError
from utils.logger import log


class EmbeddingTable:
    """Matrix Φ (|V| x d) with optional node names."""

    def __init__(self, vectors: np.ndarray, names: Optional[Sequence[str]] = None):
        if vectors.ndim != 2:
            raise DimensionMismatchError(f"embedding matrix must be 2-D, got shape {vectors.shape}")
        if names is not None and len(names) != vectors.shape[0]:
            raise DimensionMismatchError(f"{len(names)} names for {vectors.shape[0]} embedding rows")
        self.vectors = vectors
        self.names: List[str] = list(names) if names is not None else [str(i) for i in range(vectors.shape[0])]
        self._index: Optional[Dict[str, int]] = None

    @classmethod
    def initialize(
        cls,
        num_nodes: int,
        dim: int,
        rng: np.random.Generator,
        dtype=np.float32,
        names: Optional[Sequence[str]] = None
    ) -> 'EmbeddingTable':
        """Uniform init in [-0.5/d, 0.5/d), the word2vec convention."""
        vectors = ((rng.random((num_nodes, dim)) - 0.5) / dim).astype(dtype)
        return cls(vectors, names)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def index_of(self, name: str) -> int:
        """
        Row of a node name.

        Raises:
            NodeLookupError: Unknown name (message lists close matches)
        """
        if self._index is None:
            self._index = {n: i for i, n in enumerate(self.names)}
        index = self._index.get(name)
        if index is None:
            matches = difflib.get_close_matches(name, self.names, n=3)
            raise NodeLookupError(MSG_UNKNOWN_NODE.format(name=name, matches=', '.join(matches) or '-'))
        return index

    def vector(self, name: str) -> np.ndarray:
        return self.vectors[self.index_of(name)]


def save_text(table: EmbeddingTable, path: Path | str) -> Path:
    """Write the text format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8') as handle:
        handle.write(f"{len(table)} {table.dim}\n")
        for name, row in zip(table.names, table.vectors.tolist()):
            values = ' '.join(format(v, TEXT_FLOAT_FORMAT) for v in row)
            handle.write(f"{name} {values}\n")
    return path


def load_text(path: Path | str) -> EmbeddingTable:
    """
    Read the text format.

    Raises:
        ParseError: Bad header, wrong column count or row count
    """
    path = Path(path)
    try:
        handle = path.open('r', encoding='utf-8')
    except OSError as e:
        raise ParseError(f"cannot open embedding file: {e}", path) from e

    with handle:
        header = handle.readline().split()
        if len(header) != 2 or not all(part.isdigit() for part in header):
            raise ParseError("header must be '<count> <dim>'", path, 1)
        count, dim = int(header[0]), int(header[1])
        names: List[str] = []
        rows: List[List[float]] = []
        for line_no, line in enumerate(handle, start=2):
            line = line.rstrip('\n')
            if not line.strip():
                continue
            parts = line.rsplit(' ', dim)
            if len(parts) != dim + 1 or not parts[0]:
                raise ParseError(f"expected a name and {dim} values", path, line_no)
            try:
                rows.append([float(v) for v in parts[1:]])
            except ValueError as e:
                raise ParseError(f"bad value: {e}", path, line_no) from e
            names.append(parts[0])

    if len(rows) != count:
        raise ParseError(f"header declares {count} rows, found {len(rows)}", path)
    vectors = np.array(rows, dtype=np.float64).reshape(count, dim)
    return EmbeddingTable(vectors, names)


def _vocab_path(path: Path) -> Path:
    return path.with_name(path.name + VOCAB_SIDECAR_SUFFIX)


def save_binary(
    table: EmbeddingTable,
    path: Path | str,
    write_vocab: bool = True,
    row_dtype: str = BINARY_ROW_DTYPE
) -> Path:
    """Write the binary dump (float32 rows unless `row_dtype` says otherwise) and, optionally, the names sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = np.array([len(table), table.dim], dtype=BINARY_HEADER_DTYPE)
    with path.open('wb') as handle:
        handle.write(header.tobytes())
        handle.write(np.ascontiguousarray(table.vectors, dtype=row_dtype).tobytes())
    if write_vocab:
        _vocab_path(path).write_text(''.join(f"{name}\n" for name in table.names), encoding='utf-8')
    return path


def load_binary(path: Path | str, dtype=np.float32, row_dtype: str = BINARY_ROW_DTYPE) -> EmbeddingTable:
    """
    Read the binary dump. Names come from the sidecar when present, else row ids.

    `row_dtype` must match the one the file was written with; checkpoints record it in their meta.

    Raises:
        ParseError: Truncated file or header/row count mismatch
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise ParseError(f"cannot open embedding file: {e}", path) from e

    header_size = 2 * np.dtype(BINARY_HEADER_DTYPE).itemsize
    if len(raw) < header_size:
        raise ParseError("truncated header", path)
    count, dim = (int(v) for v in np.frombuffer(raw[:header_size], dtype=BINARY_HEADER_DTYPE))
    expected = header_size + count * dim * np.dtype(row_dtype).itemsize
    if len(raw) != expected:
        raise ParseError(f"header declares {count}x{dim} rows but file has {len(raw)} bytes (expected {expected})", path)
    vectors = np.frombuffer(raw[header_size:], dtype=row_dtype).reshape(count, dim).astype(dtype)

    names = None
    vocab = _vocab_path(path)
    if vocab.is_file():
        names = vocab.read_text(encoding='utf-8').splitlines()
        if len(names) != count:
            raise ParseError(f"vocabulary has {len(names)} names for {count} rows", vocab)
    return EmbeddingTable(vectors, names)


def load_embeddings(path: Path | str) -> EmbeddingTable:
    """Load either format; `.bin` files are binary."""
    path = Path(path)
    table = load_binary(path) if path.suffix == '.bin' else load_text(path)
    log.debug(f"[EMBED] LOADED | path={path} | nodes={len(table)} | dim={table.dim}")
    return table


def save_embeddings(table: EmbeddingTable, path: Path | str, fmt: str = 'text') -> Path:
    """Write `table` as 'text' or 'binary'."""
    if fmt == 'text':
        return save_text(table, path)
    if fmt == 'binary':
        return save_binary(table, path)
    raise ValueError(f"unknown embedding format '{fmt}'")

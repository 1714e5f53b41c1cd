"""
Model checkpoints.

A checkpoint directory holds:
    embeddings.bin  - binary embedding dump in the model precision (plus .vocab sidecar)
    transforms.bin  - versioned transform parameter dump
    meta            - JSON with phase, epoch, loss history and config
"""
import json
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np

from config.constants import (
    CHECKPOINT_EMBEDDINGS, CHECKPOINT_META, CHECKPOINT_META_VERSION, CHECKPOINT_TRANSFORMS,
    TRANSFORM_FORMAT_VERSION, TRANSFORM_MAGIC
)
from model.embedding import load_binary, save_binary
from model.hine_model import HineModel
from model.transform import RelationTransform
from utils.exceptions import ParseError
from utils.logger import log

_HEADER_DTYPE = '<u4'
_DTYPE_CODES = {0: '<f4', 1: '<f8'}


def save_transforms(transforms: Dict[int, RelationTransform], path: Path | str) -> Path:
    """
    Write all transforms to one file.

    Layout: magic, then uint32 [version, dtype code, edge types, layers],
    then the layer widths, then W1, b1, W2, ... per edge type in id order.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    order = sorted(transforms)
    if not order:
        raise ValueError("no transforms to save")
    first = transforms[order[0]]
    code = 1 if first.dtype == np.float64 else 0
    row_dtype = _DTYPE_CODES[code]
    header = np.array([TRANSFORM_FORMAT_VERSION, code, len(order), first.num_layers], dtype=_HEADER_DTYPE)
    with path.open('wb') as handle:
        handle.write(TRANSFORM_MAGIC)
        handle.write(header.tobytes())
        handle.write(np.array(first.widths, dtype=_HEADER_DTYPE).tobytes())
        for e in order:
            transform = transforms[e]
            if transform.widths != first.widths:
                raise ValueError(f"transform {e} widths {transform.widths} differ from {first.widths}")
            for _, array in transform.parameters():
                handle.write(np.ascontiguousarray(array, dtype=row_dtype).tobytes())
    return path


def load_transforms(path: Path | str) -> Dict[int, RelationTransform]:
    """
    Read a transform dump.

    Raises:
        ParseError: Bad magic, unsupported version or truncated data
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise ParseError(f"cannot open transform file: {e}", path) from e

    if not raw.startswith(TRANSFORM_MAGIC):
        raise ParseError("not a transform checkpoint (bad magic)", path)
    offset = len(TRANSFORM_MAGIC)
    try:
        version, code, num_types, num_layers = (int(v) for v in np.frombuffer(raw, _HEADER_DTYPE, 4, offset))
        offset += 16
        if version != TRANSFORM_FORMAT_VERSION:
            raise ParseError(f"unsupported transform format version {version}", path)
        if code not in _DTYPE_CODES:
            raise ParseError(f"unknown dtype code {code}", path)
        widths = [int(v) for v in np.frombuffer(raw, _HEADER_DTYPE, num_layers + 1, offset)]
        offset += 4 * (num_layers + 1)

        row_dtype = np.dtype(_DTYPE_CODES[code])
        transforms: Dict[int, RelationTransform] = {}
        for e in range(num_types):
            weights, biases = [], []
            for fan_in, fan_out in zip(widths[:-1], widths[1:]):
                w = np.frombuffer(raw, row_dtype, fan_in * fan_out, offset).reshape(fan_in, fan_out)
                offset += w.nbytes
                b = np.frombuffer(raw, row_dtype, fan_out, offset)
                offset += b.nbytes
                weights.append(w.astype(row_dtype.newbyteorder('=')))
                biases.append(b.astype(row_dtype.newbyteorder('=')))
            transforms[e] = RelationTransform(weights, biases)
    except ValueError as e:
        raise ParseError(f"truncated transform checkpoint: {e}", path) from e

    if offset != len(raw):
        raise ParseError(f"{len(raw) - offset} trailing bytes after transform data", path)
    return transforms


def save_checkpoint(model: HineModel, directory: Path | str, meta: Dict[str, Any]) -> Path:
    """
    Write a complete checkpoint.

    Args:
        model: Model to save
        directory: Target directory (created)
        meta: Training state (phase, epoch, losses, config, ...)
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    row_dtype = _DTYPE_CODES[1 if model.dtype == np.float64 else 0]
    save_binary(model.embeddings, directory / CHECKPOINT_EMBEDDINGS, row_dtype=row_dtype)
    save_transforms(model.transforms, directory / CHECKPOINT_TRANSFORMS)
    record = {
        'format_version': CHECKPOINT_META_VERSION,
        'max_chain_length': model.max_chain_length,
        'edge_type_names': model.edge_type_names,
        'dtype': str(model.dtype),
        'embedding_row_dtype': row_dtype,
        **meta,
    }
    (directory / CHECKPOINT_META).write_text(json.dumps(record, indent=2, sort_keys=True), encoding='utf-8')
    log.debug(f"[CKPT] SAVED | dir={directory}")
    return directory


def load_checkpoint(directory: Path | str, dtype: Optional[str] = None) -> Tuple[HineModel, Dict[str, Any]]:
    """
    Read a checkpoint directory.

    Returns:
        The restored model and its meta record

    Raises:
        ParseError: Missing or malformed files
    """
    directory = Path(directory)
    meta_path = directory / CHECKPOINT_META
    try:
        meta = json.loads(meta_path.read_text(encoding='utf-8'))
    except OSError as e:
        raise ParseError(f"cannot read checkpoint meta: {e}", meta_path) from e
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid checkpoint meta: {e}", meta_path) from e
    if meta.get('format_version') != CHECKPOINT_META_VERSION:
        raise ParseError(f"unsupported checkpoint version {meta.get('format_version')}", meta_path)

    dtype = dtype or meta.get('dtype', 'float32')
    row_dtype = meta.get('embedding_row_dtype', _DTYPE_CODES[0])
    if row_dtype not in _DTYPE_CODES.values():
        raise ParseError(f"unknown embedding row dtype {row_dtype!r}", meta_path)
    embeddings = load_binary(directory / CHECKPOINT_EMBEDDINGS, dtype=dtype, row_dtype=row_dtype)
    transforms = {
        e: RelationTransform([w.astype(dtype) for w in t.weights], [b.astype(dtype) for b in t.biases])
        for e, t in load_transforms(directory / CHECKPOINT_TRANSFORMS).items()
    }
    model = HineModel(embeddings, transforms, int(meta['max_chain_length']), meta.get('edge_type_names'))
    return model, meta

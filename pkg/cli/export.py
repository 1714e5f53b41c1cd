"""
Embedding export between the text and binary formats.
"""
import argparse
from pathlib import Path

from model.checkpoint import load_checkpoint
from model.embedding import EmbeddingTable, load_embeddings, save_embeddings
from utils.exceptions import DataError
from utils.file_manager import file_manager
from utils.logger import log


def export_embeddings(table: EmbeddingTable, out: Path | str, fmt: str) -> Path:
    """
    Write embeddings in `fmt`.

    Raises:
        DataError: Output path not writable
    """
    try:
        path = save_embeddings(table, out, fmt)
    except OSError as e:
        raise DataError(f"cannot write {out}: {e.strerror or e}") from e
    log.info(f"[EXPORT] DONE | nodes={len(table)} | dim={table.dim} | format={fmt} | path={path}")
    return path


def cmd_export(args: argparse.Namespace) -> None:
    if args.checkpoint:
        model, _ = load_checkpoint(file_manager.resolve_checkpoint(args.checkpoint))
        table = model.embeddings
    else:
        table = load_embeddings(file_manager.resolve_input(args.embeddings))
    path = export_embeddings(table, args.out, args.format)
    print(f"{len(table)} embeddings written to {path}")

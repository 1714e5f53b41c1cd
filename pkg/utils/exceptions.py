"""
Exception hierarchy.
Each error carries the process exit code the CLI maps it to.
"""
from pathlib import Path
from typing import Optional

from config.constants import EXIT_DATA, EXIT_NUMERICAL, EXIT_USAGE


class HineError(Exception):
    """Base class for all toolkit errors."""

    exit_code = EXIT_DATA


class UsageError(HineError):
    """Bad command line: unknown flag, missing argument, invalid value."""

    exit_code = EXIT_USAGE


class ConfigError(UsageError):
    """Invalid config file or configuration value."""


class DataError(HineError):
    """Input data could not be read or is inconsistent."""


class ParseError(DataError):
    """Malformed record in an input file."""

    def __init__(self, message: str, path: Optional[Path | str] = None, line_no: Optional[int] = None):
        self.path = str(path) if path is not None else None
        self.line_no = line_no
        location = ''
        if self.path is not None:
            location = f"{self.path}:{line_no}: " if line_no is not None else f"{self.path}: "
        elif line_no is not None:
            location = f"line {line_no}: "
        super().__init__(f"{location}{message}")


class EmptyGraphError(DataError):
    """Graph input contains no edges."""


class NodeLookupError(DataError, LookupError):
    """Node id or name not present in the graph or embedding table."""


class EdgeTypeLookupError(DataError, LookupError):
    """Edge type not present in the graph inventory."""


class LabelError(DataError):
    """Label file inconsistent with the embeddings or unusable for a task."""


class ModelError(HineError):
    """Invalid use of the model."""


class DimensionMismatchError(ModelError, ValueError):
    """Vector width does not match the model dimension."""


class ChainLengthError(ModelError, ValueError):
    """Relation chain is empty or longer than the configured maximum."""


class StaleTapeError(ModelError, RuntimeError):
    """Backward pass requested with a tape recorded before a parameter update."""


class NumericalError(HineError):
    """Non-finite loss or parameter; training must abort."""

    exit_code = EXIT_NUMERICAL

    def __init__(self, message: str, block: Optional[str] = None):
        self.block = block
        super().__init__(f"{message} [{block}]" if block else message)

"""Utils package initialization."""
from .logger import log, setup_logger
from .exceptions import (
    HineError, UsageError, ConfigError, DataError, ParseError, EmptyGraphError,
    NodeLookupError, EdgeTypeLookupError, LabelError, ModelError,
    DimensionMismatchError, ChainLengthError, StaleTapeError, NumericalError
)
from .progress_tracker import progress_logger, ThroughputMeter, format_time, format_count
from .file_manager import file_manager, FileManager

__all__ = [
    'log', 'setup_logger',
    'HineError', 'UsageError', 'ConfigError', 'DataError', 'ParseError', 'EmptyGraphError',
    'NodeLookupError', 'EdgeTypeLookupError', 'LabelError', 'ModelError',
    'DimensionMismatchError', 'ChainLengthError', 'StaleTapeError', 'NumericalError',
    'progress_logger', 'ThroughputMeter', 'format_time', 'format_count',
    'file_manager', 'FileManager',
]

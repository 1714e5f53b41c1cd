"""
Tab-separated record validator.
Splits input lines into fields and validates column counts and values.
"""
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

from config.constants import COMMENT_PREFIX, FIELD_SEPARATOR, RELATION_SEPARATOR
from utils.exceptions import ParseError


def is_skippable(line: str) -> bool:
    """
    Check if a line carries no record.

    A line is skipped ONLY IF:
    - it is blank
    - OR it starts with "#"

    Args:
        line: Raw line without trailing newline

    Returns:
        True if the line should be ignored
    """
    stripped = line.strip()
    return not stripped or stripped.startswith(COMMENT_PREFIX)


def split_record(
    line: str,
    expected_columns: int,
    path: Optional[Path | str] = None,
    line_no: Optional[int] = None
) -> List[str]:
    """
    Split a tab-separated line into exactly `expected_columns` non-empty fields.

    Args:
        line: Raw line without trailing newline
        expected_columns: Required column count
        path: Source file (for error messages)
        line_no: 1-based line number (for error messages)

    Returns:
        Stripped field values

    Raises:
        ParseError: Wrong column count or empty field
    """
    fields = [part.strip() for part in line.rstrip('\r\n').split(FIELD_SEPARATOR)]
    if len(fields) != expected_columns:
        raise ParseError(
            f"expected {expected_columns} tab-separated columns, found {len(fields)}",
            path, line_no
        )
    for index, value in enumerate(fields):
        if not value:
            raise ParseError(f"column {index + 1} is empty", path, line_no)
    return fields


def iter_records(path: Path | str, expected_columns: int) -> Iterator[Tuple[int, List[str]]]:
    """
    Iterate over the records of a UTF-8 tab-separated file.

    Args:
        path: Input file
        expected_columns: Required column count

    Yields:
        (line number, fields) for every non-comment, non-blank line
    """
    path = Path(path)
    try:
        handle = path.open('r', encoding='utf-8')
    except OSError as e:
        raise ParseError(f"cannot open file: {e.strerror or e}", path) from e

    with handle:
        try:
            for line_no, line in enumerate(handle, start=1):
                if is_skippable(line):
                    continue
                yield line_no, split_record(line, expected_columns, path, line_no)
        except UnicodeDecodeError as e:
            raise ParseError(f"file is not valid UTF-8: {e.reason}", path) from e


def split_relations(value: str, path: Optional[Path | str] = None, line_no: Optional[int] = None) -> List[str]:
    """
    Split a comma-separated relation chain.

    Args:
        value: Field such as "write,published_by"

    Returns:
        Relation names in order

    Raises:
        ParseError: If the chain or any relation name is empty
    """
    relations = [part.strip() for part in value.split(RELATION_SEPARATOR)]
    if not relations or any(not name for name in relations):
        raise ParseError(f"malformed relation chain '{value}'", path, line_no)
    return relations

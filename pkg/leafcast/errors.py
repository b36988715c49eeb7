"""
Leafcast Exceptions

Every error raised on purpose derives from LeafcastError and carries the
process exit code the CLI reports for it.
"""

from typing import List, Optional, Sequence, Tuple


class LeafcastError(Exception):
    """Base class for all expected failures."""

    exit_code = 1


class UsageError(LeafcastError):
    """Invalid command-line arguments or configuration values."""

    exit_code = 1


class DataError(LeafcastError):
    """Input data is missing, malformed or inconsistent."""

    exit_code = 2


class ParseError(DataError):
    """
    A text input could not be parsed.

    Args:
        message: What went wrong
        row: 1-based line number in the source (header is line 1)
        column: Column or header key involved
        source: Optional file name for the message
    """

    def __init__(
        self,
        message: str,
        row: Optional[int] = None,
        column: Optional[str] = None,
        source: Optional[str] = None
    ):
        self.row = row
        self.column = column
        self.source = source

        location = []
        if source:
            location.append(source)
        if row is not None:
            location.append(f"line {row}")
        if column:
            location.append(f"column '{column}'")

        prefix = ", ".join(location)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class DuplicateError(DataError):
    """A key that must be unique appears more than once."""


class CoverageError(DataError):
    """
    Sources do not cover the same dates.

    Args:
        missing: (tree_id, date, source) triples that are absent
    """

    def __init__(self, missing: Sequence[Tuple[str, str, str]], message: str = ""):
        self.missing: List[Tuple[str, str, str]] = list(missing)
        shown = ", ".join(f"({t}, {d}, {s})" for t, d, s in self.missing[:10])
        more = f" ... and {len(self.missing) - 10} more" if len(self.missing) > 10 else ""
        super().__init__(message or f"missing coverage for {len(self.missing)} entries: {shown}{more}")


class GridError(DataError):
    """Raster shape, georeference or extent problem."""


class CheckpointError(DataError):
    """A checkpoint cannot be read or does not fit the data."""


class NumericError(LeafcastError):
    """Non-finite values appeared in a forward pass or a loss."""

    exit_code = 3

"""Shared exception types.

The CLI maps ``DataError`` (and OS-level file errors) to exit code 2;
anything else is a bug or a usage error.
"""


class DataError(Exception):
    """Input data is unusable for the requested operation."""


class LoadError(DataError):
    """A file could not be loaded: missing, unreadable, or structurally broken."""


class NoDataError(DataError):
    """The inputs were readable but contain nothing to analyze."""

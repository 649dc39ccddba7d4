"""Exception hierarchy shared by the library, CLI, and server.

Exit codes follow the CLI contract: 1 usage, 2 format, 3 I/O,
4 computation/degeneracy.
"""


class VecuqError(Exception):
    exit_code = 4


class UsageError(VecuqError, ValueError):
    """Invalid argument or flag value."""

    exit_code = 1


class RangeError(VecuqError, IndexError):
    """Grid index or region outside the field extents."""

    exit_code = 1


class FormatError(VecuqError, ValueError):
    """Dataset or manifest contents violate the on-disk format."""

    exit_code = 2


class DataIOError(VecuqError, OSError):
    """Missing or unreadable dataset paths."""

    exit_code = 3


class ComputationError(VecuqError):
    """A computation could not produce a usable result."""

    exit_code = 4


class DegenerateError(ComputationError):
    """All inputs were degenerate (zero vectors, empty scene, ...)."""

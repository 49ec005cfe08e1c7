"""Exception hierarchy shared by the library and the command line."""

from __future__ import annotations


class WalkError(Exception):
    """Base class for every error raised by tdqwalk."""


class InvalidParameterError(WalkError, ValueError):
    """A coin or initial-state parameter is not a finite real number."""


class UsageError(WalkError, ValueError):
    """The caller combined arguments that cannot work together."""


class ConfigError(UsageError):
    """A run configuration failed to parse or validate.

    ``line`` and ``field`` locate the offending entry when known.
    """

    def __init__(self, message: str, *, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class ScheduleExhaustedError(WalkError, IndexError):
    """An explicit schedule was asked for a step it does not define."""


class UnsupportedError(WalkError, ValueError):
    """The request lies outside what a reference routine supports."""


class IntegrityError(WalkError, RuntimeError):
    """The evolution stopped being unitary; this points at a kernel bug."""

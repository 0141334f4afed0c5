"""Exception types shared across the package."""

from __future__ import annotations


class ZonkeyError(Exception):
    """Base class for all errors raised by this package."""


class NotationError(ZonkeyError):
    """Malformed coordinate or tile notation."""


class IllegalPlacementError(ZonkeyError):
    """A placement violates board geometry (overlap, bounds, connectivity)."""


class IllegalMoveError(ZonkeyError):
    """A move is inconsistent with the position (tiles not on rack, etc.)."""


class LexiconError(ZonkeyError):
    """Problem loading or querying a word list."""


class GcgError(ZonkeyError):
    """Malformed transcript or replay failure.

    Carries the 1-based line number when one is known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ScriptError(ZonkeyError):
    """Malformed or illegal scenario/line script."""


class GameFormatError(ZonkeyError):
    """Malformed matrix/signaling game file."""

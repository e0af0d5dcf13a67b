"""Exception types shared across the package."""

from __future__ import annotations


class RangeError(ValueError):
    """A value lies outside the range the hardware being modeled can express.

    ``line`` is set when the value came from a snapshot file.
    """

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class ConfigError(ValueError):
    """Transport configuration rejected; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class ParseError(ValueError):
    """Snapshot text could not be parsed. Carries the 1-based line number."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class StreamError(ValueError):
    """A byte stream handed to a merger is not well-formed MIDI.

    ``offset`` is the position of the first byte that could not belong to
    any message (or the start of a message left unfinished at end of input).
    """

    def __init__(self, offset: int, reason: str = "malformed stream"):
        super().__init__(f"byte {offset}: {reason}")
        self.offset = offset

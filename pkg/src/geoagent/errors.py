"""Exception hierarchy shared across the package."""


class GeoAgentError(Exception):
    """Base class for all package errors."""


class ValidationError(GeoAgentError):
    """An input value violates a documented precondition or invariant."""


class ClassificationError(GeoAgentError):
    """A sample cannot be classified because a required field is missing.

    ``missing`` names the field(s) the reached decision branch needed.
    """

    def __init__(self, message: str, missing: tuple[str, ...] = ()):
        super().__init__(message)
        self.missing = missing


class MissingDataError(GeoAgentError):
    """A layer or record lacks the data an operation requires."""


class RangeError(GeoAgentError):
    """A query point lies outside the covered extent."""


class TransportError(GeoAgentError):
    """A backend HTTP call failed.

    ``retryable`` tells callers whether another attempt is sensible;
    ``status`` carries the HTTP status when one was received.
    """

    def __init__(self, message: str, retryable: bool = False, status: int | None = None):
        super().__init__(message)
        self.retryable = retryable
        self.status = status


class ScriptExhaustedError(GeoAgentError):
    """A scripted backend was asked for more responses than it holds."""


class ProtocolError(GeoAgentError):
    """Model output matched neither the action nor the final-answer grammar."""

    def __init__(self, message: str, raw: str = ""):
        super().__init__(message)
        self.raw = raw


class IndexCorruptionError(GeoAgentError):
    """A persisted vector index does not match its manifest on reload."""


class DiggsParseError(GeoAgentError):
    """An XML document is malformed or internally inconsistent."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class TagNotFoundError(GeoAgentError):
    """A concept has no entry in the curated tag table; tags are never invented."""

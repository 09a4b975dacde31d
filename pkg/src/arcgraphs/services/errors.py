"""
errors.py – Exception hierarchy shared by every service module.

Precondition rejections derive from ``ValueError`` so plain callers can catch
them generically; resource exhaustion and falsified properties are kept
apart because the CLI maps them to different exit codes.
"""

from __future__ import annotations


class ArcGraphError(Exception):
    """Root of all library errors."""


class InvalidInput(ArcGraphError, ValueError):
    """An operation was called outside its precondition."""


class IncompleteGraphError(InvalidInput):
    """A global statement was requested on a radius-bounded (incomplete) graph."""


class ResourceLimitExceeded(ArcGraphError):
    """A configured cap was reached before the computation finished."""


class GeodesicOverflow(ResourceLimitExceeded):
    pass


class SearchBoundExhausted(ResourceLimitExceeded):
    pass


class VertexCapExceeded(ResourceLimitExceeded):
    pass


class AutomorphismSearchOverflow(ResourceLimitExceeded):
    pass


class Falsification(ArcGraphError):
    """A property that must hold was observed to fail."""

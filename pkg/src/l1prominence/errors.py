"""Exception hierarchy.

Everything raised on purpose by this package derives from :class:`L1Error`.
Errors caused by unreadable or malformed input files derive from
:class:`InputFormatError`; the CLI maps those to exit code 2 and every other
:class:`L1Error` to exit code 1.
"""

from __future__ import annotations


class L1Error(Exception):
    """Base class for all package errors."""


class InputFormatError(L1Error):
    """A file could not be parsed."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class MalformedRow(InputFormatError):
    pass


# graph construction ---------------------------------------------------------

class GraphValidationError(L1Error, ValueError):
    pass


class NonPositiveEdgeWeight(GraphValidationError):
    pass


class NegativeMultiplicity(GraphValidationError):
    pass


class ZeroTotalMultiplicity(GraphValidationError):
    pass


class DuplicateEdge(GraphValidationError):
    pass


class SelfLoopEdge(GraphValidationError):
    pass


class UnknownVertexName(GraphValidationError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return Exception.__str__(self)


class DuplicateVertexName(GraphValidationError):
    pass


class IsolatedVertex(GraphValidationError):
    pass


class LengthMismatch(L1Error, ValueError):
    pass


class NotStronglyConnected(L1Error):
    def __init__(self, message: str, components=None):
        super().__init__(message)
        self.components = components or []


# numerics -------------------------------------------------------------------

class DegenerateGraph(L1Error, ValueError):
    pass


class DimensionMismatch(L1Error, ValueError):
    pass


class NoConvergence(L1Error, ArithmeticError):
    pass


class NeighborhoodTooSmall(L1Error, ValueError):
    def __init__(self, message: str, alpha: float | None = None):
        super().__init__(message)
        self.alpha = alpha


# analytics ------------------------------------------------------------------

class EmptyInput(L1Error, ValueError):
    pass


class ConstantInput(L1Error, ValueError):
    pass


class TooFewValues(L1Error, ValueError):
    pass


class MissingMargins(L1Error, ValueError):
    pass


# ingest ---------------------------------------------------------------------

class NegativeCount(L1Error, ValueError):
    pass


class EmptyAfterFilter(L1Error, ValueError):
    pass

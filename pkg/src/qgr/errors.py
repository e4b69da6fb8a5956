"""Exception types shared across the package."""

from __future__ import annotations


class QgrError(Exception):
    """Base class for all errors raised by qgr."""


class ParseError(QgrError, ValueError):
    """Malformed quiver, algebra or representation input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotFiniteGK(QgrError):
    """The path algebra has infinite GK-dimension.

    ``doubly_cyclic`` holds the witnessing vertices.
    """

    def __init__(self, doubly_cyclic, message: str | None = None):
        self.doubly_cyclic = tuple(doubly_cyclic)
        if message is None:
            message = "infinite GK-dimension; doubly cyclic vertices: " + ", ".join(self.doubly_cyclic)
        super().__init__(message)


class NotCyclicVertex(QgrError, ValueError):
    """A vertex that does not lie on a cycle was used where a cyclic one is required."""


class DimensionMismatch(QgrError, ValueError):
    """Representations or matrices with incompatible shapes."""


class InvalidPoset(QgrError, ValueError):
    """A relation that is not a strict partial order."""


class NotEventuallyPeriodic(QgrError):
    """The support of a point module has no periodic tail within the truncation."""


class ExplosionCap(QgrError):
    """A brute-force enumeration exceeded its safety cap."""


class InvariantViolation(QgrError, AssertionError):
    """An internal consistency check failed; indicates a bug, not bad input."""

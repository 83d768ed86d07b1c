"""Exception hierarchy shared by every module."""


class SBDError(Exception):
    """Base class for all errors raised by vtsbd."""


class ParseError(SBDError, ValueError):
    pass


class ZeroDenominator(ParseError):
    pass


class SingularFormula(SBDError, ZeroDivisionError):
    """A closed-form expression needed a division by zero."""


class DistinctNodesRequired(SBDError, ValueError):
    pass


class DomainError(SBDError, ValueError):
    """Strict-mode validation failure (node or parameter outside the TN domain).

    ``index`` is the 1-based node index when the failure is tied to a node.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class SingularPivot(SBDError, ZeroDivisionError):
    """Neville elimination met a zero pivot above a nonzero entry."""

    def __init__(self, i, j):
        super().__init__(f"zero pivot while eliminating entry ({i}, {j})")
        self.location = (i, j)


class DimensionMismatch(SBDError, ValueError):
    pass


class NotRepresentable(SBDError, ValueError):
    """A factor sequence cannot be packed into B/C storage."""

"""Exception types shared across the package."""
from __future__ import annotations


class ShiftlabError(Exception):
    """Base class for all package errors."""


class ConfigError(ShiftlabError):
    """Invalid configuration; ``location`` is a JSON pointer."""

    def __init__(self, message, location=""):
        super().__init__(f"{location or '/'}: {message}")
        self.message = message
        self.location = location or "/"


class BudgetExceeded(ShiftlabError):
    """A search ran past its state budget. The verdict is inconclusive."""

    def __init__(self, budget, what="search"):
        super().__init__(f"{what} exceeded budget of {budget} states")
        self.budget = budget


class WindowTooSmall(ShiftlabError):
    pass


class EmptyCone(ShiftlabError):
    pass


class NoPolygon(ShiftlabError):
    pass


class NotDivisible(ShiftlabError):
    pass


class NotApplicable(ShiftlabError):
    pass


class NotConvex(ShiftlabError):
    pass


class Inconclusive(ShiftlabError):
    pass


class Divergence(ShiftlabError):
    """Counts grow faster than exponentially in the scale parameter."""

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)


class TrivialNorm(ShiftlabError):
    pass


class InfiniteDilatation(ShiftlabError):
    pass

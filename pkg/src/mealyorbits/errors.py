"""Exception types shared across the package."""


class MealyError(Exception):
    """Base class for all errors raised by this package."""


class AutomatonFormatError(MealyError):
    """Malformed automaton description (text or JSON)."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", col {col}" if col is not None else "") + ")"
        super().__init__(message + where)


class NotInvertibleError(MealyError):
    """The automaton is not letter-invertible at some state."""


class NotBoundedError(MealyError):
    """The automaton has entangled cycles and is not bounded."""


class UnsupportedAutomatonError(MealyError):
    """The requested analysis needs an automaton equal to its circuit part."""


class EmptyPostCriticalSetError(MealyError):
    """No recognizer exists because the post-critical set is empty."""


class CapExceededError(MealyError):
    """A brute-force computation would exceed the configured cap."""


class ConsistencyError(MealyError):
    """Internal invariant violated; indicates a bug, not bad input."""

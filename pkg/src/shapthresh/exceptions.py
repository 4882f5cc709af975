"""Exception types shared across the package.

The CLI maps each class to a fixed exit code, so library code raises the
most specific one that applies.
"""


class ShapThreshError(Exception):
    """Base class for all package errors."""


class SpecError(ShapThreshError, ValueError):
    """A function specification or input file could not be parsed or is invalid."""


class SizeError(ShapThreshError, ValueError):
    """The requested computation exceeds an exact-mode size cap."""


class DomainError(ShapThreshError, ValueError):
    """The input lies outside the mathematical domain of an operation.

    Raised e.g. for critical probabilities of constant or non-monotone
    functions, or for a theorem report whose hypothesis is violated.
    """

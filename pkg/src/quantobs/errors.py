"""Typed errors shared across the package.

The CLI maps these onto exit codes: input/format problems exit 2,
violated mathematical preconditions exit 3, and requests that are
well-formed but inapplicable to the given system exit 4.
"""


class QuantobsError(Exception):
    """Base class for all package errors."""


class InputFormatError(QuantobsError):
    """Malformed system description (bad JSON shape, ragged matrix, ...)."""


class DimensionError(QuantobsError):
    """Inconsistent matrix or vector dimensions."""


class DomainError(QuantobsError):
    """Value outside an operation's domain (NaN into a quantizer, ...)."""


class PreconditionError(QuantobsError):
    """A documented mathematical precondition does not hold."""


class InstabilityError(PreconditionError):
    """Spectral radius constraint violated (rho(A) < 1 required)."""


class BudgetError(QuantobsError):
    """Enumeration budget exceeded before the computation finished."""

    def __init__(self, message, required=None, budget=None):
        super().__init__(message)
        self.required = required
        self.budget = budget


class PlantOverflowError(QuantobsError):
    """Simulation produced a non-finite state or output.

    ``time`` is the first step index at which the overflow appeared.
    """

    def __init__(self, time):
        super().__init__(f"non-finite plant state or output at t={time}")
        self.time = time


class HorizonSearchError(QuantobsError):
    """No horizon satisfying the certification bound within the search cap."""


class InapplicableError(QuantobsError):
    """The requested analysis does not apply to this system."""


class FamilyContradictionError(QuantobsError):
    """Internal consistency failure during an adversarial walk.

    Raised when neither sibling branch disagrees with the observer at a
    stage boundary, which a valid family construction rules out.
    """

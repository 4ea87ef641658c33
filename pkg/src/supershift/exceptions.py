"""Exception hierarchy shared by all modules."""


class SupershiftError(Exception):
    """Base class for package errors."""


class DomainError(SupershiftError, ValueError):
    """An argument lies outside the domain of a function."""


class UnsupportedOrderError(DomainError):
    """Integer Bessel order requested where only the reflection formula exists."""


class RangeError(SupershiftError, OverflowError):
    """A result or intermediate is not representable in double precision."""


class PreconditionError(SupershiftError, ValueError):
    """Input violates a documented precondition."""


class CapabilityError(SupershiftError):
    """The requested quantity is not available for this problem variant."""


class SetupError(SupershiftError):
    """A discretisation could not be assembled."""


class QuadratureAccuracyError(SupershiftError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Attributes
    ----------
    value : complex
        Best available estimate.
    error : float
        Estimated absolute error of ``value``.
    """

    def __init__(self, message, value=complex("nan"), error=float("inf")):
        super().__init__(message)
        self.value = value
        self.error = error

"""Shared exception types."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """A gamma factor was requested at a non-positive integer."""


class StripError(DomainError):
    """A Mellin variable lies outside the declared fundamental strip."""


class DivergentTailError(DomainError):
    """Tail decay too weak for a right-sided operator to converge."""


class UnsupportedMethodError(ValueError):
    """Requested evaluation route does not support the given parameters."""


class ConvergenceError(RuntimeError):
    """A series, quadrature or contour integral exhausted its budget."""

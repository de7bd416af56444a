"""Exception hierarchy.  The CLI maps each family onto one exit code."""


class BHLabError(Exception):
    """Base class for all package errors."""


class DomainError(BHLabError, ValueError):
    """An argument lies outside the domain where a formula is stated."""


class ConvergenceError(BHLabError, RuntimeError):
    pass


class AdmissibilityError(DomainError):
    """An exponent vector violates an admissibility constraint.

    ``constraint`` names the violated condition (``"exponent sum"``,
    ``"exponent range"``, ``"interpolation parameter"``, ...).
    """

    def __init__(self, message: str, constraint: str):
        super().__init__(message)
        self.constraint = constraint


class TensorDataError(BHLabError, ValueError):
    """Malformed, mismatched or identically zero coefficient data."""


class CapExceededError(BHLabError):
    """Exact enumeration would exceed the configured sign-pattern cap."""


class BoundViolationError(BHLabError, AssertionError):
    """A certified ratio exceeded a proved upper bound.

    This can only mean a bug in the norm or ratio code.
    """

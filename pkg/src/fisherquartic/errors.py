"""Exception types raised by fisherquartic."""


class FisherQuarticError(Exception):
    """Base class for all package errors."""


class DomainError(FisherQuarticError, ValueError):
    """An argument lies outside the domain of a closed-form expression."""


class NumericPrecisionError(FisherQuarticError, ArithmeticError):
    """A finite-difference step collapsed to zero or crossed a domain boundary."""


class ConvergenceError(FisherQuarticError, RuntimeError):
    """The reference eigensolver did not converge under refinement.

    Attributes:
        diagnostics: Mapping with the eigenvalues at each basis size and the shift.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})

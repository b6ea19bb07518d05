"""Exception hierarchy shared by every module of the package."""


class HardyError(Exception):
    """Base class for all package errors."""


class ParameterError(HardyError, ValueError):
    """Parameters outside the admissible range or regime."""


class RegimeError(ParameterError):
    """Exponents do not fall into any declared regime of an inequality."""


class ConeError(ParameterError):
    """A function does not belong to the required cone of monotone functions."""


class DomainError(HardyError, ValueError):
    """Evaluation point outside the domain of a function."""


class DivergenceError(HardyError, ArithmeticError):
    """An integral (or functional) diverges."""


class NumericalFailure(HardyError, ArithmeticError):
    """Quadrature did not converge within its refinement budget."""

    def __init__(self, message, best_estimate=float("nan"), error_estimate=float("inf")):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class UnsupportedCase(HardyError):
    """Requested operation is not registered for this inequality case."""

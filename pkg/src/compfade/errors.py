"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class EvaluationError(ValueError):
    """An integrand or series term produced a non-finite value."""


class DivergentIntegralError(DomainError):
    """The requested integral does not converge for the given parameters."""


class NonConvergenceError(ArithmeticError):
    """An adaptive scheme exhausted its budget before reaching tolerance.

    The partial result, when available, is attached as ``result`` so the
    caller can decide whether to accept it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result

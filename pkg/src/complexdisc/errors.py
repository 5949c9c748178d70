"""Exception hierarchy shared across the package."""


class ComplexDiscError(Exception):
    """Base class for all package errors."""


class ConfigurationError(ComplexDiscError, ValueError):
    """Invalid parameters or configuration input."""


class NumericError(ComplexDiscError, ArithmeticError):
    """A numerical procedure failed or lost accuracy."""


class LossOfOrthogonalityError(NumericError):
    """Real recurrence produced a non-positive or non-finite coefficient."""

    def __init__(self, k, value):
        self.k = k
        self.value = value
        super().__init__(f"recurrence breakdown at k={k} (beta={value!r})")


class BreakdownError(NumericError):
    """Complex (non-Hermitian Lanczos-type) recursion hit a vanishing nu_k."""

    def __init__(self, k, value):
        self.k = k
        self.value = value
        super().__init__(f"complex recurrence breakdown at k={k} (nu={value!r})")


class DegeneracyError(NumericError):
    """Eigenvector matrix is (numerically) defective."""


class NearDefectiveError(DegeneracyError):
    """Effective Hamiltonian too close to an exceptional point to diagonalize."""


class StepSizeError(NumericError):
    """Time-stepping did not converge under step halving."""

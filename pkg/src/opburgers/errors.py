"""Exception types shared across the package."""


class OperatorBurgersError(Exception):
    """Base class for package-specific failures."""


class DomainError(OperatorBurgersError, ValueError):
    """Argument outside an operation's mathematical domain."""


class FactorialCapError(DomainError):
    """Polynomial degree beyond the exact-integer factorial table."""


class ConvergenceError(OperatorBurgersError):
    """Series or iteration failed to converge; carries the partial result."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ParameterError(OperatorBurgersError, ValueError):
    """Structurally invalid parameter set (e.g. a non-increasing clock)."""


class StencilError(OperatorBurgersError):
    """A finite-difference stencil could not be evaluated."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class SingularPathError(OperatorBurgersError):
    """An integration path crossed a zero of an operator coefficient."""


class SingularMetricError(OperatorBurgersError):
    """Metric determinant vanished at the evaluation point."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class UnsupportedCheckError(OperatorBurgersError):
    """The requested check is not defined for the given operator kind."""


class UnsupportedConstraintError(OperatorBurgersError):
    """Constraint solving needs constant unit eigenvalues on every axis."""


class AccuracyError(OperatorBurgersError):
    """Quadrature failed to reach the requested tolerance; carries the estimate."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class LogDomainError(OperatorBurgersError):
    """Logarithm requested where the companion field vanishes or flips sign."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class ArityError(OperatorBurgersError, ValueError):
    """Mismatched coefficient/generator counts."""


class BlowUpError(OperatorBurgersError):
    """Trajectory left the representable range; carries the failure time."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class ExclusionBudgetError(OperatorBurgersError):
    """Too many grid points failed evaluation for a report to be meaningful."""


class PoleWarning(UserWarning):
    """A closed-form coefficient has a pole inside the working interval."""

"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`QuotientError`,
so callers (and the CLI) can separate precondition failures from bugs.
"""


class QuotientError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(QuotientError, ValueError):
    pass


class NonFiniteInput(QuotientError, ValueError):
    pass


class ConvergenceFailure(QuotientError, ArithmeticError):
    pass


class NotHermitian(QuotientError, ValueError):
    pass


class NotPositiveSemidefinite(QuotientError, ValueError):
    pass


class PreconditionViolated(QuotientError, ValueError):
    """A mathematical precondition does not hold within tolerance.

    ``residual`` carries the measured violation and ``tolerance`` the threshold
    it was compared against, so that reports can show by how much it failed.
    """

    def __init__(self, message, residual=float("nan"), tolerance=float("nan")):
        super().__init__(message)
        self.residual = float(residual)
        self.tolerance = float(tolerance)

    def __str__(self):
        base = super().__str__()
        return f"{base} (residual={self.residual:.3e}, tolerance={self.tolerance:.3e})"


class RangeInclusionViolated(PreconditionViolated):
    pass


class KernelInclusionViolated(PreconditionViolated):
    pass


class RangesNotEqual(PreconditionViolated):
    pass


class KernelsNotEqual(PreconditionViolated):
    pass


class OutOfDomain(PreconditionViolated):
    pass


class DenominatorMismatch(PreconditionViolated):
    pass


class ReverseOrderConditionViolated(PreconditionViolated):
    pass


class InvalidWitness(PreconditionViolated):
    def __init__(self, message, compatibility_residual, kernel_residual, tolerance):
        super().__init__(message, max(compatibility_residual, kernel_residual), tolerance)
        self.compatibility_residual = float(compatibility_residual)
        self.kernel_residual = float(kernel_residual)


class SimplificationConditionViolated(PreconditionViolated):
    pass


class InvalidSpec(QuotientError, ValueError):
    pass


class ParseError(QuotientError, ValueError):
    """Malformed matrix file. ``line`` and ``column`` are 1-based (0 = unknown)."""

    def __init__(self, message, path=None, line=0, column=0):
        self.path = path
        self.line = line
        self.column = column
        where = f"{path or '<input>'}:{line}"
        if column:
            where += f":{column}"
        super().__init__(f"{where}: {message}")


class IoError(QuotientError, OSError):
    pass

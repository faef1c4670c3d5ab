"""Exception hierarchy shared by all qsim modules."""


class QsimError(Exception):
    """Base class for every error raised by qsim."""


class NonHermitianInput(QsimError, ValueError):
    pass


class ParseError(QsimError, ValueError):
    """Malformed circuit text. Carries the 1-based line number."""

    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class ValidationError(QsimError, ValueError):
    pass


class InsertionMismatch(QsimError, ValueError):
    pass


class SingularBracket(QsimError, ArithmeticError):
    """A per-qubit bracket fell below the singularity floor."""

    def __init__(self, qubit, value):
        self.qubit = qubit
        self.value = value
        super().__init__(f"bracket of qubit {qubit} is singular (|b| = {abs(value):.3e})")


class DriftOverflow(QsimError, ArithmeticError):
    pass


class ConvergenceFailure(QsimError, RuntimeError):
    """The Langevin walker escaped. ``diagnostics`` describes where and when."""

    def __init__(self, message, diagnostics=None):
        self.diagnostics = dict(diagnostics or {})
        super().__init__(message)


class ZeroSignal(QsimError, RuntimeError):
    """The Metropolis phase average is buried in its own noise.

    The (unreliable) estimate is still attached as ``estimate``.
    """

    def __init__(self, message, estimate=None):
        self.estimate = estimate
        super().__init__(message)


class WalkerError(QsimError, RuntimeError):
    def __init__(self, walker, cause):
        self.walker = walker
        self.cause = cause
        super().__init__(f"walker {walker}: {cause}")


class DimensionMismatch(QsimError, ValueError):
    pass


class QubitCountExceeded(QsimError, ValueError):
    pass


class ImpossiblePrescription(QsimError, ValueError):
    pass


class QuadratureDiverged(QsimError, RuntimeError):
    pass

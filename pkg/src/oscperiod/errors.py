"""Exception hierarchy for oscperiod."""


class OscPeriodError(Exception):
    """Base class for all errors raised by this package."""


class NumericalFailure(OscPeriodError):
    """A numerical routine could not deliver a result (CLI exit code 2)."""


# series arithmetic
class NonUnitConstantTerm(OscPeriodError, ValueError):
    pass


class VariableMismatch(OscPeriodError, ValueError):
    pass


class ZeroLinearTerm(OscPeriodError, ValueError):
    pass


class NonzeroConstant(OscPeriodError, ValueError):
    pass


class ZeroConstantTerm(OscPeriodError, ValueError):
    pass


class TruncationTooHigh(OscPeriodError, ValueError):
    pass


# floating-point routes
class ToleranceNotReached(NumericalFailure):
    pass


class OutOfDomain(NumericalFailure, ValueError):
    pass


class StepSizeUnderflow(NumericalFailure):
    pass


class InsufficientSpan(NumericalFailure):
    pass


class SingularSystem(NumericalFailure):
    pass


class NoConvergence(NumericalFailure):
    pass

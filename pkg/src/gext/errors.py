"""Exception hierarchy shared by all gext modules."""


class GextError(Exception):
    """Base class for every error raised by this package."""


class RingMismatch(GextError):
    pass


class UnknownVariable(GextError):
    pass


class NonUnitImageForInvertedVariable(GextError):
    pass


class LaurentInput(GextError):
    pass


class NotUnivariateAfterSpecialization(GextError):
    pass


class ParseError(GextError):
    """Malformed text input; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ResourceBudgetExceeded(GextError):
    pass


class BadCodim(GextError):
    pass


class CapExceeded(GextError):
    def __init__(self, message: str, variable: str | None = None):
        super().__init__(message)
        self.variable = variable


class NotCertifiedNilpotent(GextError):
    pass


class ZeroDenominator(GextError):
    pass


class FNotInCenter(GextError):
    pass


class UnitIdealCheckFailed(GextError):
    pass


class PointNotOnRequiredCurve(GextError):
    pass


class RuleCViolated(GextError):
    pass


class TrivialNearO(GextError):
    pass


class LevelBelowL0(GextError):
    pass


class DegreeTooHigh(GextError):
    pass


class SynthesisStuck(GextError):
    pass

"""Exception hierarchy shared by every module of the package."""


class BsepError(Exception):
    """Base class for all errors raised by bsep."""


class ParseError(BsepError):
    """Malformed graph or addressing text. Carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(BsepError):
    """Input is well formed but violates a structural rule."""


class DisconnectedError(ValidationError):
    pass


class NotWeightMinimal(ValidationError):
    pass


class TriangleViolation(ValidationError):
    pass


class NotATree(ValidationError):
    pass


class WrongSize(ValidationError):
    pass


class EmptyInput(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class SizeLimit(BsepError):
    """Instance is larger than a configured cap."""


class NoApplicableBound(BsepError):
    pass


class BudgetExceeded(BsepError):
    """A search ran out of its node budget before finishing.

    Never means "infeasible": the instance was simply not decided.
    """

    def __init__(self, message: str, lower: int | None = None, upper: int | None = None):
        self.lower = lower
        self.upper = upper
        super().__init__(message)

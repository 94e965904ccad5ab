"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes):

* :class:`ValidationError` -- the input violates a documented precondition.
* :class:`NumericalFailure` -- the input was fine but a tolerance could not
  be met (truncation too short, graded mesh not converged, ...).
"""


class RieszLabError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(RieszLabError, ValueError):
    """Precondition violated by the caller."""


class NumericalFailure(RieszLabError, ArithmeticError):
    """A numerical tolerance could not be reached."""


# frequency
class NotIncreasing(ValidationError):
    pass


class NegativeFirst(ValidationError):
    pass


class RangeExceeded(ValidationError):
    pass


class DegeneratePair(ValidationError):
    pass


class ZeroFrequencyTail(ValidationError):
    pass


# series
class NonPositiveX(ValidationError):
    pass


class ScheduleEmpty(ValidationError):
    pass


class ZeroLambda(ValidationError):
    pass


# abscissa / spaces
class EvaluationFailure(NumericalFailure):
    pass


class Lambda1Zero(ValidationError):
    pass


class ZeroNorm(NumericalFailure):
    pass


class NotReached(NumericalFailure):
    def __init__(self, message: str, largest_deviation: float):
        super().__init__(message)
        self.largest_deviation = largest_deviation


class PreconditionError(ValidationError):
    pass


# transforms / special functions
class DomainError(ValidationError):
    pass


class TruncationTooSmall(NumericalFailure):
    pass


class TailDominates(NumericalFailure):
    pass


class NonintegrableOrder(ValidationError):
    pass


class IllSeparated(ValidationError):
    pass


class SingularityUnresolved(NumericalFailure):
    pass


# catalog
class PrecisionLoss(NumericalFailure):
    pass


class WrongFrequency(ValidationError):
    pass


class UnknownCatalogEntry(ValidationError, KeyError):
    def __str__(self):
        # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""



# cli
class ParseError(ValidationError):
    pass


class ToleranceFailure(NumericalFailure):
    pass

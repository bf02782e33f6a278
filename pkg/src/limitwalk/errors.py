"""Exception hierarchy.

Two families matter to callers: ``ValidationError`` for bad inputs and
``NumericalError`` for failures of the numerical pipeline.  The CLI maps
them to exit codes 1 and 2.
"""


class LimitWalkError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(LimitWalkError, ValueError):
    pass


class NumericalError(LimitWalkError, ArithmeticError):
    pass


# pmf
class EmptyWeights(ValidationError):
    pass


class NegativeWeight(ValidationError):
    pass


class ZeroMassAtMinimum(ValidationError):
    pass


class ZeroTotalMass(ValidationError):
    pass


class InvalidParameter(ValidationError):
    pass


# cycle
class DNotPositive(ValidationError):
    pass


class ZeroArgument(ValidationError):
    pass


class NotComputable(ValidationError):
    """Raised when an operation needs a negative-drift (computable) case."""


class ConvolutionError(NumericalError):
    pass


# roots
class RootCountMismatch(NumericalError):
    pass


class NewtonDivergence(NumericalError):
    pass


# boundary
class IndexOutOfRange(ValidationError, IndexError):
    pass


class SingularSystem(NumericalError):
    pass


class NonMonotoneSolution(NumericalError):
    pass


class MultipleRootsPresent(ValidationError):
    pass


class ClosedFormNotApplicable(ValidationError):
    """The closed form only covers patterns with no within-period overshoot."""


# limitdist
class RecurrenceInstability(NumericalError):
    pass


class NearRootArgument(ValidationError):
    pass


# oracle
class StateBudgetExceeded(ValidationError):
    pass


# cli
class ConfigError(ValidationError):
    pass

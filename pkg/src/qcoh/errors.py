"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
1 for bad input, 2 for a failed computation or oracle, 3 for a numeric
tolerance failure.
"""


class QcohError(Exception):
    exit_code = 2

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details


class InputError(QcohError):
    exit_code = 1


class ComputationError(QcohError):
    exit_code = 2


class ToleranceError(QcohError):
    exit_code = 3


# input / validation
class DimensionMismatch(InputError):
    pass


class EmptyStack(InputError):
    pass


class NotCompact(InputError):
    pass


class InfiniteStabilizer(InputError):
    pass


class EtaNotGeneric(InputError):
    pass


class CharacterInvalid(InputError):
    pass


class DimensionNotOne(InputError):
    pass


class NotInFiltrationLevel(InputError):
    pass


class HardLefschetzFails(InputError):
    pass


# computation
class NotConstant(ComputationError):
    def __init__(self, message="", numerator=None, denominator=None):
        super().__init__(message, numerator=numerator, denominator=denominator)
        self.numerator = numerator
        self.denominator = denominator


class DegreeMismatch(ComputationError):
    pass


class OracleMismatch(ComputationError):
    pass


class NonInvertibleDenominator(ComputationError):
    pass


class AsymptoticsViolated(ComputationError):
    pass


class MixedTermsSurvive(ComputationError):
    pass


class NonNefBasis(ComputationError):
    pass


# numeric tolerance
class NotNearInteger(ToleranceError):
    pass


class QuadratureNotConverged(ToleranceError):
    pass

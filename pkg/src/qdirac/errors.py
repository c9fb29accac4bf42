"""Exception hierarchy shared by every module."""


class QDiracError(ValueError):
    """Base class for all domain errors raised by qdirac."""


class DimensionError(QDiracError):
    pass


class NotColumn(QDiracError):
    pass


class WrongDimension(QDiracError):
    pass


class NotNormalized(QDiracError):
    pass


class NotUnitary(QDiracError):
    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation


class WrongArity(QDiracError):
    pass


class ZeroProbabilityBranch(QDiracError):
    pass


class PromiseViolated(QDiracError):
    pass


class IndeterminateOutcome(QDiracError):
    pass


class NotACloner(QDiracError):
    pass


class OutOfRange(QDiracError):
    pass


class InvalidGrid(QDiracError):
    pass

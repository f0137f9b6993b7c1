"""Exception types raised by the popoviciu package."""


class PopoviciuError(ValueError):
    """Base class for all package errors."""


class DimensionMismatchError(PopoviciuError):
    pass


class InsufficientSamplesError(PopoviciuError):
    pass


class DegenerateStepError(PopoviciuError):
    """Raised for a zero step ``h``; the determinant identity is vacuous there."""


class AmbiguousOrderError(PopoviciuError):
    """The recurrence system is rank deficient; a smaller order should be used."""

    def __init__(self, message, detected_rank):
        super().__init__(message)
        self.detected_rank = detected_rank


class ZeroRootError(PopoviciuError):
    pass


class ResidualTooLargeError(PopoviciuError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class RankDeficiencyError(PopoviciuError):
    """The supplied order is not minimal for the translate family."""

    def __init__(self, message, detected_rank):
        super().__init__(message)
        self.detected_rank = detected_rank


class RankExcessError(PopoviciuError):
    """The translate family has rank above the supplied order."""

    def __init__(self, message, detected_rank):
        super().__init__(message)
        self.detected_rank = detected_rank


class SingularOperatorError(PopoviciuError):
    pass


class ProbeSetTooSmallError(PopoviciuError):
    pass


class NonFiniteSamplesError(PopoviciuError):
    pass

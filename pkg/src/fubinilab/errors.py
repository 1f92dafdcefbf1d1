"""Exception hierarchy shared by every fubinilab module."""


class FubiniLabError(Exception):
    """Base class for all library errors."""


class NonPrimeCharacteristic(FubiniLabError, ValueError):
    pass


class BoundExceeded(FubiniLabError):
    """A construction would enumerate more than the configured bound."""


class NotContinuous(FubiniLabError):
    pass


class NotLinear(FubiniLabError):
    pass


class NotLinearizable(FubiniLabError):
    """The linear extension of a continuous map failed its continuity certificate."""


class AxiomViolation(FubiniLabError):
    """A structure fails the convergence-space or vector-space axioms."""


class MismatchedConstructions(FubiniLabError):
    """Two independent constructions of the same map disagree."""


class EnrichmentMismatch(FubiniLabError):
    pass


class IterationBudgetExhausted(FubiniLabError):
    def __init__(self, message, chain=()):
        super().__init__(message)
        self.chain = tuple(chain)


class DimensionMismatch(FubiniLabError, ValueError):
    pass


class ConfigError(FubiniLabError, ValueError):
    pass

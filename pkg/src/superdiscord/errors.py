"""Exception hierarchy.

Every error raised on purpose by this package derives from
:class:`SuperDiscordError`, which is itself a :class:`ValueError` so callers
that only care about "bad input" can catch that.
"""


class SuperDiscordError(ValueError):
    """Base class for all package errors."""


class InvalidState(SuperDiscordError):
    """A matrix failed density-matrix validation."""

    def __init__(self, invariant, magnitude, message=None):
        self.invariant = invariant
        self.magnitude = float(magnitude)
        if message is None:
            message = f"{invariant} violated (magnitude {self.magnitude:.3e})"
        super().__init__(message)


class NotHermitian(InvalidState):
    def __init__(self, magnitude):
        super().__init__("Hermiticity", magnitude,
                         f"NotHermitian: max |m - m^H| = {magnitude:.3e}")


class TraceNotOne(InvalidState):
    def __init__(self, magnitude):
        super().__init__("unit trace", magnitude,
                         f"TraceNotOne: |Tr - 1| = {magnitude:.3e}")


class NotPositiveSemidefinite(InvalidState):
    def __init__(self, magnitude):
        super().__init__("positive semidefiniteness", magnitude,
                         f"NotPositiveSemidefinite: min eigenvalue = {-magnitude:.3e}")


class NegativeStrength(SuperDiscordError):
    """Measurement strength below zero."""


class ZeroProbability(SuperDiscordError):
    """A measurement outcome has (numerically) zero probability."""


class OutOfRange(SuperDiscordError):
    """Spin correlation outside the physical dimer interval."""


class OutOfPhysicalRange(OutOfRange):
    """Spin correlation inverted from a susceptibility is unphysical."""


class NonPositiveComponent(SuperDiscordError):
    """A g-factor component is zero or negative."""


class InvalidModel(SuperDiscordError):
    """Dimer model parameters violate their bounds."""


class InvalidTemperature(SuperDiscordError):
    pass


class OptimizerDidNotConverge(SuperDiscordError):
    pass


class InternalConsistencyError(SuperDiscordError):
    """Computed quantities disagree beyond floating-point noise."""


class InvalidDataset(SuperDiscordError):
    pass


class InsufficientData(SuperDiscordError):
    pass


class DegenerateData(SuperDiscordError):
    pass

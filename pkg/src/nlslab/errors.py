"""Exception types shared across the laboratory modules."""


class NlslabError(Exception):
    """Base class for all nlslab errors."""


class ConditionViolated(NlslabError):
    """Exponent preconditions of the chosen construction do not hold."""


class InvalidPair(NlslabError):
    """A requested space-time exponent pair is not admissible."""


class NoBoundState(NlslabError):
    """No shooting bracket exists: the frequency lies outside the existence range."""


class NotConverged(NlslabError):
    """An iterative solve finished without meeting its tolerance."""


class CertificateUnbounded(NlslabError):
    """The decay-certificate maximand has not peaked inside the grid."""


class NoKink(NlslabError):
    """The nonlinearity admits no half-kink (no root of the plateau equation)."""


class QuadratureSingular(NlslabError):
    """The kink first integral becomes negative inside (0, b): wrong plateau."""


class GridTooSmall(NlslabError):
    """A profile would wrap around the periodic domain at the requested time."""


class NonFinite(NlslabError):
    """A field became non-finite during time stepping."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class InsufficientSamples(NlslabError):
    """Too few snapshots to evaluate a mixed space-time norm."""


class DegenerateFit(NlslabError):
    """Fewer than four usable samples remain for an exponential fit."""


class QuadratureUnderResolved(NlslabError):
    """Halving the Duhamel quadrature step changed the first iterate too much."""


class ConfigError(NlslabError):
    """A run configuration failed validation."""

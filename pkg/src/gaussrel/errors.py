"""Exception hierarchy shared by the library and the command line."""


class GaussrelError(ValueError):
    """Base class for every error raised by this package."""


class AsymmetricInput(GaussrelError):
    pass


class NonFiniteEntry(GaussrelError):
    pass


class ComplexSpectrum(GaussrelError):
    """The biquadratic for the symplectic spectrum has complex roots."""


class SingularCovariance(GaussrelError):
    pass


class NotPhysical(GaussrelError):
    """The matrix violates V >= (i/2) sigma."""


class NonPositiveSqueeze(GaussrelError):
    pass


class ParseError(GaussrelError):
    pass


class BudgetExhausted(GaussrelError):
    """The evaluation cap was hit before the search converged.

    ``best`` holds the best :class:`~gaussrel.tps_search.ExtremalResult`
    found so far.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best

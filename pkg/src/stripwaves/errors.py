"""Exception types raised across the package."""


class TruncationError(ValueError):
    """A sample grid is too coarse for the requested truncation order."""


class ParameterError(ValueError):
    """A physical or numerical parameter is outside its admissible range."""


class NonPhysicalStateError(ValueError):
    """The state violates a physical constraint (e.g. negative radicand)."""


class SingularTransformError(ValueError):
    """The holomorphic field W vanishes or changes sign; transform undefined."""


class ContinuationError(RuntimeError):
    """Newton iteration failed; ``last`` holds the final iterate, if any."""

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


class GraphConditionWarning(UserWarning):
    """The free surface is not the graph of a function (min Re W <= 0)."""

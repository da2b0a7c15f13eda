"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter is outside the mathematical domain of an operation."""


class TruncationError(RuntimeError):
    """A quadrature tail does not decay below tolerance on the grid.

    Carries the estimated tail contribution so callers can decide whether
    to enlarge the grid.
    """

    def __init__(self, message: str, tail_estimate: float = float("nan")):
        super().__init__(message)
        self.tail_estimate = tail_estimate


class PreconditionError(ValueError):
    """An operation's stated precondition is violated (e.g. orthogonality)."""

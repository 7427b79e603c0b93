"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain where the function is defined."""


class UnsupportedOrderError(ValueError):
    """Requested order is not implemented."""


class AccuracyError(RuntimeError):
    """A numerical method ran out of budget before reaching its tolerance.

    The best available estimate is kept on ``best`` so callers can decide
    whether it is good enough anyway.
    """

    def __init__(self, message, best=None, est_error=None):
        super().__init__(message)
        self.best = best
        self.est_error = est_error


class InvalidCurveError(ValueError):
    """The model y^2 = f(x) is singular or otherwise not a genus-2 curve."""


class CountingError(RuntimeError):
    """Point counts that cannot come from a genus-2 curve (a counting bug)."""


class ScanTooLargeError(ValueError):
    """Exhaustive enumeration refused because the model space is too big."""

    def __init__(self, message, n_models):
        super().__init__(message)
        self.n_models = n_models

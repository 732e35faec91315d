"""Exception types shared across the toolkit."""


class SpaceTooLargeError(ValueError):
    """A full-space scan was requested beyond the enumeration guard."""


class InfeasibleParamsError(ValueError):
    """Parameters violate a stated precondition (the message names it)."""


class BudgetExceededError(RuntimeError):
    """An exact computation ran out of its time or node budget."""


class DominationFailure(RuntimeError):
    """No sampling trial met the partial-domination thresholds.

    Carries the best attempt so callers can fall back or report it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best

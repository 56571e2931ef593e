"""Exception types raised by finitekey."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class ConvergenceError(RuntimeError):
    """An iterative routine exhausted its iteration budget."""


class BudgetError(ValueError):
    """A security budget is inconsistent or infeasible."""


class ThresholdNotFoundError(RuntimeError):
    """No positive key rate exists below the search ceiling."""

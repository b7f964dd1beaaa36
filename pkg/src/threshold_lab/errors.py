"""Exception types shared across the experiment modules."""


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration or sampling request exceeds its documented budget."""


class BracketError(RuntimeError):
    """Bisection endpoints do not straddle the target probability beyond their CIs."""

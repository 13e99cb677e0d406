class BudgetExceededError(RuntimeError):
    """Raised when an instance would need more cells than the configured budget."""

    def __init__(self, what: str, count: int, budget: int):
        self.what = what
        self.count = count
        self.budget = budget
        super().__init__(f"{what}: {count} cells exceeds budget {budget}")


class UnknownFaceError(KeyError):
    pass


class NotAcyclicError(ValueError):
    pass

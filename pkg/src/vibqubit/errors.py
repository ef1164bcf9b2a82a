"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument violates a documented precondition."""


class ResourceError(RuntimeError):
    """A computation would exceed the configured memory budget.

    Carries ``required_bytes`` and ``budget_bytes`` so callers can report
    how far over budget the request was.
    """

    def __init__(self, message: str, required_bytes: int, budget_bytes: int):
        super().__init__(message)
        self.required_bytes = required_bytes
        self.budget_bytes = budget_bytes

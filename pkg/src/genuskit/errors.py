"""Shared exception types."""


class ResourceLimitError(RuntimeError):
    """A computation exceeded a configured size bound."""


class SearchBudgetExceeded(ResourceLimitError):
    """An enumeration or backtracking search ran past its node budget.

    ``checkpoint`` describes how far the search got, so a partial run can
    be reported instead of silently discarded.
    """

    def __init__(self, message: str, checkpoint: dict | None = None):
        super().__init__(message)
        self.checkpoint = checkpoint or {}

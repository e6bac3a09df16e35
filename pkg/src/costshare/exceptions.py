class CostShareError(Exception):
    """Base class for input errors raised by this package."""


class InstanceError(CostShareError, ValueError):
    pass


class ReportError(CostShareError, ValueError):
    pass


class CapExceededError(CostShareError):
    """More selected nodes than the coalition enumeration cap allows."""

    def __init__(self, n_players, cap):
        self.n_players = n_players
        self.cap = cap
        super().__init__(
            f"{n_players} selected nodes exceed the enumeration cap of {cap} "
            f"(raise it with --max-coalition-nodes)"
        )


class MissingBudgetError(CostShareError, ValueError):
    pass


class NotATreeError(CostShareError, ValueError):
    pass

from typing import Optional


class FitError(Exception):
    """Base class for parameter-estimation errors."""
    pass


class InsufficientRowsError(FitError):
    """Fewer rows than the family has parameters (or than one MLP batch)."""
    pass


class RankDeficiencyError(FitError):
    """Design matrix is not full column rank."""

    def __init__(self, rank: int, columns: int):
        self.rank = rank
        self.columns = columns
        super().__init__(f"design matrix has rank {rank} < {columns} columns")


class StartAbortedError(FitError):
    """A single multistart hit a non-finite or invalid cost and was abandoned."""
    pass


class FitFailedError(FitError):
    """Every multistart was rejected (singular denominators or aborted)."""
    pass


class MLPDivergenceError(FitError):
    """Training cost blew past the divergence limit."""

    def __init__(self, epoch: int, cost: float, limit: Optional[float] = None):
        self.epoch = epoch
        self.cost = cost
        detail = f" (limit {limit:.6g})" if limit is not None else ""
        super().__init__(f"MLP training diverged at epoch {epoch}: cost {cost!r}{detail}")

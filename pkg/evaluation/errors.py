class EvaluationError(Exception):
    """Inputs cannot be evaluated (length mismatch, empty data, n < k, bad bins)."""
    pass

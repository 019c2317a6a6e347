class SelectionError(Exception):
    """Candidate set or selection config is unusable (empty, no LOCAL node, bad alpha)."""
    pass


class MissingSegmentError(SelectionError):
    """An EDGE node refers to a segment with no delay."""
    pass

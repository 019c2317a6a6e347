class DatasetError(Exception):
    """Base class for telemetry ingestion / feature engineering errors."""
    pass


class MissingColumnError(DatasetError):
    """A mapped column is absent from the CSV header."""
    pass


class NonNumericCellError(DatasetError):
    """A cell could not be parsed as a number."""
    pass


class EmptyDatasetError(DatasetError):
    """No valid rows (or no samples at all)."""
    pass


class MissingDivisorError(DatasetError):
    """A retained feature has no divisor in the ScalingSpec."""
    pass


class CorrelationError(DatasetError):
    """Pearson correlation is undefined for the given vectors."""
    pass


class MissingFileError(DatasetError):
    """The telemetry CSV does not exist."""
    pass

from typing import Optional


class ModelError(Exception):
    """Base class for model-family errors."""
    pass


class DenominatorSingularityError(ModelError):
    """
    A rational denominator fell to or below the floor at some row.
    `row` is the 0-based index of the first offending row.
    """

    def __init__(self, row: int, value: float, message: Optional[str] = None):
        self.row = row
        self.value = value
        super().__init__(message or f"denominator {value!r} <= floor at row {row}")


class DomainError(ModelError):
    """Input outside the family's domain (e.g. X <= 0 with fractional powers)."""
    pass


class UnknownFamilyError(ModelError):
    """Family tag not recognised."""
    pass


class ModelFormatError(ModelError):
    """Model file missing fields or carrying an unsupported version."""
    pass


class SchemaMismatchError(ModelError):
    """Model and data disagree on features or scaling."""
    pass

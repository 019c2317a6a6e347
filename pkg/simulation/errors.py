class GeneratorConfigError(Exception):
    """Generator configuration cannot produce valid telemetry."""
    pass


class SaturationError(GeneratorConfigError):
    """Load at or beyond queue capacity (delay diverges)."""
    pass

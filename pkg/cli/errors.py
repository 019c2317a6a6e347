class UsageError(Exception):
    """Unrecognised subcommand or invalid flags (exit status 1)."""

    def __init__(self, message: str, usage: str = ""):
        self.usage = usage
        super().__init__(message)

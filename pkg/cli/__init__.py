"""
Command-line package: `python -m cli <subcommand> ...`.
"""

from .errors import UsageError
from .main import build_parser, main, run
from .manifest import RunManifest

__all__ = ["run", "main", "build_parser", "RunManifest", "UsageError"]

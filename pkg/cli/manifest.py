"""
Purpose: Run manifests.
What it does:
Every CLI run that gets past argument parsing writes exactly one
`<subcommand>.manifest.json` into its output directory: the resolved
configuration, seeds, input/output paths, sha256 of every file touched,
wall-clock duration and the outcome.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

PathLike = Union[str, Path]


def file_digest(path: PathLike) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def dump_json(doc: Any) -> str:
    """The one JSON rendering used for every report and manifest."""
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


@dataclass
class RunManifest:
    subcommand: str
    config: Dict[str, Any] = field(default_factory=dict)
    seeds: Dict[str, int] = field(default_factory=dict)
    inputs: List[str] = field(default_factory=list)
    outputs: List[str] = field(default_factory=list)
    started_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    duration_s: float = 0.0
    status: str = "ok"
    error: Optional[str] = None

    def add_input(self, path: PathLike) -> None:
        self.inputs.append(str(path))

    def add_output(self, path: PathLike) -> None:
        self.outputs.append(str(path))

    def digests(self) -> Dict[str, str]:
        return {p: file_digest(p) for p in self.inputs + self.outputs if Path(p).is_file()}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subcommand": self.subcommand,
            "config": self.config,
            "seeds": self.seeds,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "digests": self.digests(),
            "started_at": self.started_at,
            "duration_s": self.duration_s,
            "status": self.status,
            "error": self.error,
        }

    def write(self, out_dir: PathLike) -> Path:
        path = Path(out_dir) / f"{self.subcommand}.manifest.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dump_json(self.to_dict()), encoding="utf-8")
        return path

"""
Purpose: CSV ingestion for delay telemetry.
What it does:
- load_csv: header mapping -> numeric parsing -> invariant check -> SampleSet
- write_csv: canonical header, 12 significant digits per value

Invalid rows (negative sizes, non-positive delay, ...) are skipped and
reported, real telemetry is dirty. Unparseable cells abort the load.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Union

import numpy as np
import pandas as pd

from .errors import (
    DatasetError,
    EmptyDatasetError,
    MissingColumnError,
    MissingFileError,
    NonNumericCellError,
)
from .models import CSV_COLUMNS, SampleSet, TelemetrySample

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# Documented decimal serialization.
CSV_FLOAT_FORMAT = "%.12g"


def load_csv(path: PathLike, schema: Optional[Mapping[str, str]] = None) -> SampleSet:
    """
    Read a telemetry CSV into a SampleSet (file order preserved).

    Parameters
    ----------
    path:
        UTF-8, comma-delimited file with a header row.
    schema:
        canonical column name -> header in this file. Missing entries map to
        the canonical name itself.

    Returns
    -------
    SampleSet with `rejected_rows` holding the 1-based data row numbers that
    failed TelemetrySample invariants.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"telemetry file not found: {path}")

    mapping = {name: name for name in CSV_COLUMNS}
    mapping.update(schema or {})

    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise EmptyDatasetError(f"{path} is empty") from None
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise DatasetError(f"cannot parse {path}: {exc}") from exc

    frame.columns = [str(column).strip() for column in frame.columns]
    missing = [header for header in mapping.values() if header not in frame.columns]
    if missing:
        raise MissingColumnError(f"{path}: missing column(s) {', '.join(missing)}")

    columns: Dict[str, np.ndarray] = {}
    for name, header in mapping.items():
        columns[name] = _parse_numeric(frame[header], header, path)

    samples: List[TelemetrySample] = []
    rejected: List[int] = []
    for row in range(len(frame)):
        sample = TelemetrySample(
            client_frame_size=float(columns["Client_Frame_Size"][row]),
            arrival_rate_cl=float(columns["Arrival_rate_Cl"][row]),
            arrival_rate_all=float(columns["Arrival_rate_All"][row]),
            utilization=float(columns["Utilization"][row]),
            delay=float(columns["Delay"][row]),
        )
        problems = sample.violations()
        if problems:
            rejected.append(row + 1)
            logger.debug("row %d rejected: %s", row + 1, "; ".join(problems))
            continue
        samples.append(sample)

    if rejected:
        logger.warning("%s: rejected %d invalid row(s): %s", path, len(rejected), _format_rows(rejected))

    if not samples:
        raise EmptyDatasetError(f"{path}: no valid rows")

    logger.info("loaded %d samples from %s", len(samples), path)
    return SampleSet(samples=tuple(samples), provenance=str(path), rejected_rows=tuple(rejected))


def write_csv(samples: SampleSet, path: PathLike) -> Path:
    """
    Write samples with the canonical header. Values carry 12 significant
    digits, so anything already rounded to 12 digits reloads exactly.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    samples.to_frame().to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    return path


# -----------------------------
# Internal helpers
# -----------------------------

def _parse_numeric(raw: pd.Series, header: str, path: Path) -> np.ndarray:
    text = raw.astype(str).str.strip()
    values = pd.to_numeric(text, errors="coerce")
    bad = np.flatnonzero(values.isna().to_numpy())
    if bad.size:
        row = int(bad[0])
        raise NonNumericCellError(
            f"{path}: row {row + 1}, column {header}: {text.iloc[row]!r} is not a number"
        )
    return values.to_numpy(dtype=float)


def _format_rows(rows: List[int], limit: int = 20) -> str:
    shown = ", ".join(str(r) for r in rows[:limit])
    if len(rows) > limit:
        shown += f", ... (+{len(rows) - limit} more)"
    return shown

import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

OUTPUT_DIR_ENV = "LATENCYKIT_OUTPUT_DIR"


def default_output_dir() -> Path:
    return Path(os.getenv(OUTPUT_DIR_ENV) or "runs")

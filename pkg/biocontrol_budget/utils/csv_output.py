"""
Artifact writers — CSV and JSON outputs of a run.
Files are written without timestamps so identical configs give byte-identical artifacts.
"""

import json
import math
from pathlib import Path

import pandas as pd

FLOAT_FORMAT = "%.17g"


def save_table(df: pd.DataFrame, directory, name: str) -> Path:
    """
    Save a DataFrame to {directory}/{name}.csv.

    Args:
        df: table to write, columns in output order
        directory: output directory, created if missing
        name: file stem (e.g. "trace", "sweep")

    Returns:
        Path to the saved CSV file.
    """
    target_dir = Path(directory)
    target_dir.mkdir(parents=True, exist_ok=True)
    path = target_dir / f"{name}.csv"

    df.to_csv(path, index=False, encoding="utf-8", float_format=FLOAT_FORMAT, lineterminator="\n")
    print(f"  [CSV] {len(df)} rows -> {path}")
    return path


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def save_json(payload: dict, directory, name: str) -> Path:
    """Save payload to {directory}/{name}.json with sorted keys; inf/nan become null."""
    target_dir = Path(directory)
    target_dir.mkdir(parents=True, exist_ok=True)
    path = target_dir / f"{name}.json"
    text = json.dumps(_json_safe(payload), indent=2, sort_keys=True, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8")
    print(f"  [JSON] -> {path}")
    return path
